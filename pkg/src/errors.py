# src/errors.py
"""
Exception types raised across the package.

Input problems subclass ValueError, catalog misses subclass LookupError and
search budgets subclass RuntimeError, so callers that only know the builtins
still catch the right things.
"""

from __future__ import annotations

from typing import Optional, Tuple


class UnitalError(Exception):
    """Base class for every error raised by this package."""


class WrongCounts(UnitalError, ValueError):
    pass


class PairCovered(UnitalError, ValueError):
    """A pair of points (or lines) is covered a wrong number of times."""

    def __init__(self, pair: Tuple[int, int], count: int, what: str = "points"):
        self.pair = pair
        self.count = count
        self.what = what
        super().__init__(f"{what} {pair[0]} and {pair[1]} are joined {count} times (expected 1)")


class NotLinear(UnitalError, ValueError):
    pass


class EmptyStructure(UnitalError, ValueError):
    pass


class DuplicateBlocks(UnitalError, ValueError):
    pass


class DegreeMismatch(UnitalError, ValueError):
    pass


class NotSquareOrder(UnitalError, ValueError):
    pass


class NotAUnital(UnitalError, ValueError):
    """A point set fails the line-intersection test; the message names the first bad line."""


class NotPrime(UnitalError, ValueError):
    pass


class NonUniformBlocks(UnitalError, ValueError):
    pass


class NotDivisible(UnitalError, ValueError):
    pass


class PlaneFormatError(UnitalError, ValueError):
    pass


class UnknownFixture(UnitalError, LookupError):
    pass


class MissingPlaneData(UnitalError, LookupError):
    pass


class BudgetExhausted(UnitalError, RuntimeError):
    """Raised inside budgeted searches; drivers turn it into a result flag."""

    def __init__(self, reason: str, spent: Optional[dict] = None):
        self.reason = reason
        self.spent = dict(spent or {})
        super().__init__(f"budget exhausted: {reason}")
