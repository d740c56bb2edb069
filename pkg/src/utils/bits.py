# src/utils/bits.py
from __future__ import annotations

from typing import Iterable, List, Sequence

import numpy as np

WORD_BITS = 64


def mask_of(indices: Iterable[int]) -> int:
    """Python-int bitset with the given bit positions set."""
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def words_for(n: int) -> int:
    return (n + WORD_BITS - 1) // WORD_BITS


def pack_rows(rows: Sequence[Sequence[int]], n: int) -> np.ndarray:
    """
    Pack index rows into a (len(rows), ceil(n/64)) uint64 matrix.
    Bit j of a row lives in word j // 64 at position j % 64.
    """
    words = np.zeros((len(rows), words_for(n)), dtype=np.uint64)
    for r, row in enumerate(rows):
        for j in row:
            words[r, j // WORD_BITS] |= np.uint64(1) << np.uint64(j % WORD_BITS)
    return words


def row_popcounts(words: np.ndarray) -> np.ndarray:
    """Set bits per row of a packed matrix."""
    if words.size == 0:
        return np.zeros(words.shape[0], dtype=np.int64)
    words = np.ascontiguousarray(words)
    as_bytes = words.view(np.uint8).reshape(words.shape[0], -1)
    return np.unpackbits(as_bytes, axis=1).sum(axis=1).astype(np.int64)


def intersection_counts(words: np.ndarray, query: np.ndarray) -> np.ndarray:
    """|row & query| for every packed row; query is one packed row."""
    return row_popcounts(words & query[np.newaxis, :])

