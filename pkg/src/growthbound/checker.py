"""Forbidden-power detection on concrete words."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from growthbound import _accel
from growthbound import _kernels as K
from growthbound.exponent import RationalExponent, forbidden_length_table

Word = Sequence[int]


def _as_array(w: Word) -> np.ndarray:
    a = np.asarray(w, dtype=np.int64)
    if a.ndim != 1:
        raise ValueError("a word is a one-dimensional letter sequence")
    if a.size and (a.min() < 0 or a.max() > 255):
        raise ValueError("letters must lie in 0..255")
    return a.astype(np.uint8)


def _suffix_period(word: np.ndarray, length: int, flen: np.ndarray, m: int) -> int:
    if _accel.use_numba(length * m):
        return int(K.suffix_period_nb(word, length, flen, m))
    return int(K.suffix_period_py(word, length, flen, m))


def has_period(w: Word, p: int) -> bool:
    n = len(w)
    if not 1 <= p <= n:
        raise ValueError(f"period {p} outside 1..{n}")
    return all(w[i] == w[i + p] for i in range(n - p))


def ends_with_forbidden_power(w: Word, e: RationalExponent, m: int) -> Optional[int]:
    """Smallest period ``p <= m`` such that ``w`` ends with a forbidden ``p``-periodic power."""
    word = _as_array(w)
    cap = min(m, len(word))
    if cap < 1:
        return None
    flen = np.array(forbidden_length_table(e, cap), dtype=np.int64)
    p = _suffix_period(word, len(word), flen, cap)
    return p or None


def is_allowed(w: Word, e: RationalExponent, m: Optional[int] = None) -> bool:
    """True iff no factor of ``w`` is a forbidden power with period at most ``m``.

    ``m=None`` tests membership in the power-free language itself.
    """
    word = _as_array(w)
    n = len(word)
    cap = n if m is None else min(m, n)
    if cap < 1:
        return True
    flen = np.array(forbidden_length_table(e, cap), dtype=np.int64)
    for length in range(1, n + 1):
        if _suffix_period(word, length, flen, min(cap, length)):
            return False
    return True
