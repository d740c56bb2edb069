# Makes 'src' an importable package so `python -m src.main` works everywhere.

__version__ = "1.0.0"
