"""Series of upper bounds over the period cap, extrapolation and jumps."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from decimal import ROUND_CEILING, ROUND_FLOOR, ROUND_HALF_UP, Decimal
from typing import Callable, Optional

from growthbound.exponent import Classification, RationalExponent, TaskSpec, classify, parse_exponent
from growthbound.graph import FactorGraph, ResourceError, build_graph
from growthbound.spectral import Enclosure, spectral_enclosure

log = logging.getLogger(__name__)

_SEVEN = Decimal("1e-7")


def round_display(x: float, direction: str) -> str:
    """Exact decimal rounding of a float to 7 places: ``down``, ``up`` or ``nearest``."""
    mode = {"down": ROUND_FLOOR, "up": ROUND_CEILING, "nearest": ROUND_HALF_UP}[direction]
    return str(Decimal(x).quantize(_SEVEN, rounding=mode))


@dataclass(frozen=True)
class GrowthRecord:
    spec: TaskSpec
    n_states: int
    n_edges: int
    enclosure: Enclosure
    display_lo: str
    display_hi: str
    estimate: Optional[float] = None
    finite: bool = False
    truncated: bool = False

    @property
    def lo(self) -> float:
        return self.enclosure.lo

    @property
    def hi(self) -> float:
        return self.enclosure.hi

    def to_dict(self) -> dict:
        e = self.spec.exponent
        return {
            "spec": {"k": self.spec.k, "exponent": str(e), "m": self.spec.m, "symmetry": self.spec.symmetry},
            "graph": {"states": self.n_states, "edges": self.n_edges},
            "bound": {
                "lo": self.enclosure.lo,
                "hi": self.enclosure.hi,
                "display_lo": self.display_lo,
                "display_hi": self.display_hi,
            },
            "estimate": self.estimate,
            "finite": self.finite,
            "truncated": self.truncated,
            "converged": self.enclosure.converged,
        }


def make_record(spec: TaskSpec, g: FactorGraph, enc: Enclosure, paper_rounding: bool = False, **kw) -> GrowthRecord:
    lo_mode, hi_mode = ("nearest", "nearest") if paper_rounding else ("down", "up")
    return GrowthRecord(
        spec=spec,
        n_states=g.n_states,
        n_edges=g.n_edges,
        enclosure=enc,
        display_lo=round_display(enc.lo, lo_mode),
        display_hi=round_display(enc.hi, hi_mode),
        finite=classify(spec.k, spec.exponent) is Classification.FINITE,
        **kw,
    )


def compute_bound(spec: TaskSpec, loader: Callable[[TaskSpec], FactorGraph] = build_graph, paper_rounding: bool = False) -> GrowthRecord:
    g = loader(spec)
    enc = spectral_enclosure(g, spec.precision, spec.max_iters)
    return make_record(spec, g, enc, paper_rounding)


class GrowthSeries(list):
    """Records in increasing ``m``; ``truncated`` is set when a build hit the cap."""

    truncated: bool = False
    stopped_at: Optional[int] = None

    @property
    def estimate(self) -> Optional[float]:
        return self[-1].estimate if self else None


def aitken(u0: float, u1: float, u2: float) -> Optional[float]:
    """Aitken delta-squared limit of three successive terms, ``None`` if degenerate."""
    d1, d2 = u1 - u0, u2 - u1
    denom = d2 - d1
    scale = max(abs(u0), abs(u1), abs(u2), 1e-300)
    if denom == 0.0 or abs(denom) <= 1e-15 * scale:
        return None
    # equals (u2*u0 - u1**2) / denom without the cancellation
    return u2 - d2 * d2 / denom


def run_series(
    k: int,
    e,
    m_from: int,
    m_to: int,
    precision: float = 1e-9,
    state_cap: int = 2**27,
    symmetry: Optional[bool] = None,
    loader: Callable[[TaskSpec], FactorGraph] = build_graph,
    jobs: int = 1,
    paper_rounding: bool = False,
) -> GrowthSeries:
    """Upper bounds for ``m = m_from..m_to`` with running extrapolation.

    Approximation languages shrink as ``m`` grows, so each upper bound is
    clamped by its predecessor; the result stays a valid enclosure.
    """
    e = parse_exponent(e)
    if m_from > m_to or m_from < 1:
        raise ValueError(f"bad period range {m_from}..{m_to}")
    if symmetry is None:
        symmetry = k >= 3
    specs = [
        TaskSpec(k=k, exponent=e, m=m, symmetry=symmetry, precision=precision, state_cap=state_cap)
        for m in range(m_from, m_to + 1)
    ]
    out = GrowthSeries()
    if classify(k, e) is Classification.FINITE:
        specs = specs[:1]

    def task(spec):
        g = loader(spec)
        return g, spectral_enclosure(g, spec.precision, spec.max_iters)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(task, s) for s in specs]
            results = []
            for f in futures:
                try:
                    results.append(f.result())
                except ResourceError as exc:
                    results.append(exc)
    else:
        results = []
        for s in specs:
            try:
                results.append(task(s))
            except ResourceError as exc:
                results.append(exc)
                break

    his: list[float] = []
    for spec, res in zip(specs, results):
        if isinstance(res, ResourceError):
            log.warning("series stopped at m=%d: %s", spec.m, res)
            out.truncated = True
            out.stopped_at = spec.m
            break
        g, enc = res
        if his and enc.hi > his[-1]:
            enc = replace(enc, hi=max(his[-1], enc.lo))
        his.append(enc.hi)
        est = aitken(*his[-3:]) if len(his) >= 3 else None
        out.append(make_record(spec, g, enc, paper_rounding, estimate=est))
    if out.truncated and out:
        out[-1] = replace(out[-1], truncated=True)
    return out


def _bounds(x) -> tuple[float, float]:
    if isinstance(x, GrowthRecord):
        return x.enclosure.lo, x.enclosure.hi
    return float(x.lo), float(x.hi)


def _identity(x) -> tuple[int, RationalExponent] | None:
    if isinstance(x, GrowthRecord):
        return x.spec.k, x.spec.exponent
    k, e = getattr(x, "k", None), getattr(x, "exponent", None)
    if k is None or e is None:
        return None
    return k, parse_exponent(e)


def jump_interval(rec_beta, rec_beta_plus) -> tuple[float, float]:
    """Certified interval for ``alpha(k, beta+) - alpha(k, beta)``, clamped at 0.

    Accepts growth records or any objects with ``lo``/``hi`` (and optionally
    ``k``/``exponent``) such as fixture cells.
    """
    a, b = _identity(rec_beta), _identity(rec_beta_plus)
    if a is not None and b is not None:
        (ka, ea), (kb, eb) = a, b
        if ka != kb or ea.value != eb.value or ea.strict or not eb.strict:
            raise ValueError(f"jump needs (k, beta) and (k, beta+); got ({ka}, {ea}) and ({kb}, {eb})")
    lo_b, hi_b = _bounds(rec_beta)
    lo_p, hi_p = _bounds(rec_beta_plus)
    return max(lo_p - hi_b, 0.0), max(hi_p - lo_b, 0.0)
