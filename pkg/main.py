#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Repository-root launcher: `python main.py <group> <command> ...`."""

import sys

from src.main import main

if __name__ == "__main__":
    sys.exit(main())
