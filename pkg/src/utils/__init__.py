# src/utils/__init__.py
"""
Facade for the small helpers, so callers can write
  from .utils import mask_of, indices_of
whichever helper module the function lives in.
"""

from .bits import indices_of, intersection_counts, mask_of, pack_rows, row_popcounts

__all__ = ["indices_of", "intersection_counts", "mask_of", "pack_rows", "row_popcounts"]
