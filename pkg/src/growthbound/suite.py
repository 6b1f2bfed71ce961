"""Self-check suites run by ``growthbound check`` and by the tests."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Callable, Iterator, Optional

from growthbound import fixtures
from growthbound.counting import brute_count, graph_count
from growthbound.exponent import Classification, TaskSpec, classify, parse_exponent
from growthbound.graph import FactorGraph, ResourceError, build_graph
from growthbound.spectral import spectral_enclosure

ORACLE_KS = (2, 3)
ORACLE_EXPONENTS = ("2", "2+", "7/3", "7/3+", "3", "3+")
ORACLE_CAPS = (1, 2, 3, 4, None)
ORACLE_N = 14

# fixture values are rounded to 7 decimals
DISPLAY_SLACK = Decimal("1e-7")


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def oracle_grid():
    for k in ORACLE_KS:
        for e in ORACLE_EXPONENTS:
            for m in ORACLE_CAPS:
                yield k, parse_exponent(e), m


def oracle_check(k, e, m, n_max=ORACLE_N, loader: Callable[[TaskSpec], FactorGraph] = build_graph) -> CheckResult:
    name = f"k={k} e={e} m={'-' if m is None else m}"
    brute = brute_count(k, e, m, n_max)
    if m is None:
        capped = brute_count(k, e, n_max, n_max)
        ok = capped.counts == brute.counts
        return CheckResult(name, ok, "" if ok else f"cap saturation mismatch {capped.counts} vs {brute.counts}")
    builds = [False, True] if k >= 3 else [False]
    for sym in builds:
        g = loader(TaskSpec(k=k, exponent=e, m=m, symmetry=sym))
        for n in range(g.order, n_max + 1):
            got = graph_count(g, n)
            if got != brute[n]:
                return CheckResult(name, False, f"symmetry={sym} n={n}: graph {got} != brute {brute[n]}")
    return CheckResult(name, True)


def oracle_suite(n_max=ORACLE_N, loader=build_graph) -> Iterator[CheckResult]:
    for k, e, m in oracle_grid():
        yield oracle_check(k, e, m, n_max, loader)


def bracketing_targets():
    """(k, exponent, published lower bound) for every cell carrying one."""
    seen = {}
    for cell in fixtures.all_cells():
        if cell.lo_text is None:
            continue
        lo = Decimal(cell.lo_text)
        if lo <= 0:
            continue
        key = (cell.k, cell.exponent)
        seen[key] = max(seen.get(key, lo), lo)
    return [(k, e, lo) for (k, e), lo in sorted(seen.items(), key=lambda kv: (kv[0][0], kv[0][1]))]


def bracketing_suite(
    m_max: int = 3, state_cap: int = 200_000, precision: float = 1e-9, loader=build_graph
) -> Iterator[CheckResult]:
    """Every computed upper bound must sit above the published lower bound."""
    for k, e, lo in bracketing_targets():
        for m in range(1, m_max + 1):
            spec = TaskSpec(k=k, exponent=e, m=m, symmetry=k >= 3, precision=precision, state_cap=state_cap)
            try:
                g = loader(spec)
            except ResourceError:
                break
            enc = spectral_enclosure(g, precision)
            ok = Decimal(enc.hi) >= lo - DISPLAY_SLACK
            yield CheckResult(f"k={k} e={e} m={m}", ok, f"hi={enc.hi:.10f} published lo={lo}")


def finiteness_suite() -> Iterator[CheckResult]:
    """Zero cells in the tables are exactly the finite languages."""
    for cell in fixtures.all_cells():
        if cell.kind == "exact" and Decimal(cell.hi_text) == 0:
            ok = classify(cell.k, cell.exponent) is Classification.FINITE
        elif cell.kind in ("exact", "two_sided", "upper_only") and cell.hi and cell.hi > 0:
            ok = classify(cell.k, cell.exponent) is Classification.INFINITE
        else:
            continue
        yield CheckResult(f"table {cell.table} k={cell.k} e={cell.exponent}", ok)


def cache_suite(cache) -> Iterator[CheckResult]:
    for name, err in cache.verify():
        yield CheckResult(f"cache {name}", err is None, err or "")
