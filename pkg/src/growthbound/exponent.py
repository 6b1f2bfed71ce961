"""Rational exponents, forbidden-power lengths and the Dejean finiteness gate."""

from __future__ import annotations

import enum
import functools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

# Kernel tables are int64; products a*p must stay well inside that range.
_INT64_SAFE = 2**62

_EXPONENT_RE = re.compile(r"^\s*(\d+)(?:\s*/\s*(\d+))?\s*(\+?)\s*$")


class ExponentParseError(ValueError):
    """Base class for malformed exponent text."""


class MalformedExponentError(ExponentParseError):
    pass


class ZeroDenominatorError(ExponentParseError):
    pass


class ExponentTooSmallError(ExponentParseError):
    pass


@functools.total_ordering
@dataclass(frozen=True, init=False)
class RationalExponent:
    """An exponent ``a/b`` in lowest terms, optionally strict (``a/b+``).

    A strict exponent forbids only powers of exponent strictly greater than
    ``a/b``. Ordering is ``beta < beta+ < anything larger than beta``.
    """

    numerator: int
    denominator: int
    strict: bool = False

    def __init__(self, numerator: int, denominator: int = 1, strict: bool = False):
        if denominator == 0:
            raise ZeroDenominatorError("zero denominator")
        if numerator <= 0 or denominator < 0:
            raise MalformedExponentError(f"exponent must be positive: {numerator}/{denominator}")
        g = math.gcd(numerator, denominator)
        a, b = numerator // g, denominator // g
        if a < b:
            raise ExponentTooSmallError(f"exponent {a}/{b} is below 1")
        object.__setattr__(self, "numerator", a)
        object.__setattr__(self, "denominator", b)
        object.__setattr__(self, "strict", bool(strict))

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def _key(self) -> tuple[Fraction, bool]:
        return (self.value, self.strict)

    def __lt__(self, other: RationalExponent) -> bool:
        if not isinstance(other, RationalExponent):
            return NotImplemented
        return self._key() < other._key()

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __str__(self) -> str:
        s = str(self.numerator)
        if self.denominator != 1:
            s += f"/{self.denominator}"
        return s + ("+" if self.strict else "")

    def with_strict(self, strict: bool) -> RationalExponent:
        return RationalExponent(self.numerator, self.denominator, strict)


def parse_exponent(text: str) -> RationalExponent:
    """Parse ``INT[/INT][+]`` into a reduced exponent.

    >>> parse_exponent("14/6")
    RationalExponent(numerator=7, denominator=3, strict=False)
    """
    if isinstance(text, RationalExponent):
        return text
    m = _EXPONENT_RE.match(str(text))
    if m is None:
        raise MalformedExponentError(f"cannot parse exponent {text!r}; expected a[/b][+]")
    a = int(m.group(1))
    b = int(m.group(2)) if m.group(2) is not None else 1
    if b == 0:
        raise ZeroDenominatorError(f"zero denominator in {text!r}")
    if a == 0:
        raise ExponentTooSmallError(f"exponent {text!r} is below 1")
    return RationalExponent(a, b, strict=m.group(3) == "+")


def forbidden_length(e: RationalExponent, p: int) -> int:
    """Least length at which a word of period ``p`` is a forbidden power."""
    if p < 1:
        raise ValueError(f"period must be positive, got {p}")
    a, b = e.numerator, e.denominator
    if e.strict:
        return (a * p) // b + 1
    return -((-a * p) // b)


def forbidden_length_table(e: RationalExponent, m: int) -> list[int]:
    """``[0, fl(e,1), ..., fl(e,m)]``, guarded for int64 kernels."""
    if e.numerator * m >= _INT64_SAFE:
        raise OverflowError(f"exponent {e} with period cap {m} overflows int64 kernels")
    return [0] + [forbidden_length(e, p) for p in range(1, m + 1)]


class Classification(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"


def repetition_threshold(k: int) -> Fraction:
    if k < 2:
        raise ValueError(f"alphabet size must be at least 2, got {k}")
    if k == 3:
        return Fraction(7, 4)
    if k == 4:
        return Fraction(7, 5)
    return Fraction(k, k - 1)


def classify(k: int, e: RationalExponent) -> Classification:
    """Infinite iff ``e`` is at least the strict repetition threshold for ``k`` letters."""
    t = repetition_threshold(k)
    if e.value > t or (e.value == t and e.strict):
        return Classification.INFINITE
    return Classification.FINITE


@dataclass(frozen=True)
class TaskSpec:
    k: int
    exponent: RationalExponent
    m: int
    symmetry: bool = False
    precision: float = 1e-9
    state_cap: int = 2**27
    max_iters: int = field(default=1_000_000, compare=False)

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"alphabet size must be at least 2, got {self.k}")
        if self.k > 255:
            raise ValueError("alphabet size above 255 is not supported")
        if self.m < 1:
            raise ValueError(f"period cap must be positive, got {self.m}")
        if not self.precision > 0:
            raise ValueError(f"precision must be positive, got {self.precision}")
        if self.state_cap < 1:
            raise ValueError(f"state cap must be positive, got {self.state_cap}")
        if not isinstance(self.exponent, RationalExponent):
            object.__setattr__(self, "exponent", parse_exponent(self.exponent))

    @property
    def order(self) -> int:
        return forbidden_length(self.exponent, self.m) - 1

    def key(self) -> str:
        e = self.exponent
        return f"{self.k}/{e.numerator}/{e.denominator}/{int(e.strict)}/{self.m}/{int(self.symmetry)}"
