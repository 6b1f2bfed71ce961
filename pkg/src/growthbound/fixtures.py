"""Published reference values: the four growth-rate tables and quoted text values.

Numbers are kept as decimal strings so comparisons are digit-exact. Estimates
whose last digit was parenthesized (uncertain) are stored without it; their
tolerance is one unit of the last kept digit.
"""

from __future__ import annotations

import csv
import functools
import hashlib
import io
from dataclasses import dataclass
from decimal import Decimal
from importlib import resources
from typing import Optional

from growthbound.exponent import RationalExponent, parse_exponent

FIXTURE_FILE = "reference_tables.csv"
FIXTURE_SHA256 = "7898902bd8908a818b6c499c73f84ae8842f86c11c44dc58cdd4a41456b56a24"
COLUMNS = ["table", "k", "exponent", "m", "lo", "hi", "estimate", "jump"]


@dataclass(frozen=True)
class ReferenceCell:
    table: str
    k: int
    exponent: RationalExponent
    kind: str  # exact | two_sided | upper_only | estimate
    m: Optional[int] = None
    lo_text: Optional[str] = None
    hi_text: Optional[str] = None
    estimate_text: Optional[str] = None
    jump_text: Optional[str] = None

    @property
    def lo(self) -> Optional[float]:
        return None if self.lo_text is None else float(self.lo_text)

    @property
    def hi(self) -> Optional[float]:
        return None if self.hi_text is None else float(self.hi_text)

    @property
    def estimate(self) -> Optional[float]:
        return None if self.estimate_text is None else float(self.estimate_text)

    @property
    def jump(self) -> Optional[float]:
        return None if self.jump_text is None else float(self.jump_text)

    @property
    def estimate_tolerance(self) -> Optional[float]:
        if self.estimate_text is None:
            return None
        return float(Decimal(1).scaleb(Decimal(self.estimate_text).as_tuple().exponent))


def raw_text() -> str:
    return resources.files("growthbound.data").joinpath(FIXTURE_FILE).read_text(encoding="ascii")


def checksum(text: Optional[str] = None) -> str:
    return hashlib.sha256((raw_text() if text is None else text).encode("ascii")).hexdigest()


def _kind(lo, hi, est) -> str:
    if lo is not None and hi is not None:
        return "exact" if Decimal(lo) == Decimal(hi) else "two_sided"
    if hi is not None:
        return "upper_only"
    return "estimate"


def parse_cells(text: str) -> tuple[ReferenceCell, ...]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != COLUMNS:
        raise ValueError(f"fixture columns {reader.fieldnames} != {COLUMNS}")
    cells = []
    for row in reader:
        get = lambda name: row[name] or None  # noqa: E731
        lo, hi, est = get("lo"), get("hi"), get("estimate")
        cells.append(
            ReferenceCell(
                table=row["table"],
                k=int(row["k"]),
                exponent=parse_exponent(row["exponent"]),
                kind=_kind(lo, hi, est),
                m=int(row["m"]) if row["m"] else None,
                lo_text=lo,
                hi_text=hi,
                estimate_text=est,
                jump_text=get("jump"),
            )
        )
    return tuple(cells)


@functools.lru_cache(maxsize=1)
def all_cells() -> tuple[ReferenceCell, ...]:
    return parse_cells(raw_text())


def lookup(k: int, e) -> list[ReferenceCell]:
    e = parse_exponent(e)
    return [c for c in all_cells() if c.k == k and c.exponent == e]


def best_lower_bound(k: int, e) -> Optional[Decimal]:
    """Largest published lower bound on the true growth rate, if any.

    Lower-bound evidence: two-sided/exact ``lo`` values. Upper-only cells give none.
    """
    los = [Decimal(c.lo_text) for c in lookup(k, e) if c.lo_text is not None]
    return max(los) if los else None
