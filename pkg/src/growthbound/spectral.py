"""Certified enclosures of the Perron root of a factor graph.

Each nontrivial strongly connected block ``C`` is handled by power iteration
on ``A_C + I`` from the all-ones vector. The identity shift makes every
irreducible block primitive, so the iteration converges even on periodic
graphs. For any positive vector ``v`` the Collatz-Wielandt quotients
``(Av)_i / v_i`` bracket the spectral radius; we keep the tightest pair seen
and widen it outward to absorb floating-point rounding.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from growthbound import _accel
from growthbound import _kernels as K
from growthbound.graph import FactorGraph, scc_decompose

log = logging.getLogger(__name__)

DEFAULT_PRECISION = 1e-9
DEFAULT_MAX_ITERS = 1_000_000


@dataclass(frozen=True)
class Enclosure:
    lo: float
    hi: float
    converged: bool = True
    iterations: int = 0
    empty: bool = False

    def __post_init__(self):
        if not (0.0 <= self.lo <= self.hi):
            raise ValueError(f"invalid enclosure [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: Enclosure) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi


def perron_certificate(indptr, indices, weights, precision=DEFAULT_PRECISION, max_iters=DEFAULT_MAX_ITERS):
    """Power iteration on an irreducible CSR block.

    Returns ``(lo, hi, iterations, converged, v)``; ``v`` is the last positive
    iterate, usable to re-check the Collatz-Wielandt quotients.
    """
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    # equal integer row sums: the all-ones vector is an exact eigenvector
    rows = np.add.reduceat(weights, indptr[:-1]) if len(weights) and (np.diff(indptr) > 0).all() else None
    if rows is not None and rows.max() < 2**52 and (rows == rows[0]).all():
        r = float(rows[0])
        return r, r, 0, True, np.ones(len(rows))
    # iteration counts are unknown up front; assume a few hundred sweeps
    if _accel.use_numba(300 * (len(indices) + len(indptr))):
        lo, hi, it, ok, v = K._power_iterate_nb(indptr, indices, weights, float(precision), int(max_iters))
    else:
        lo, hi, it, ok, v = K._power_iterate_np(indptr, indices, weights, float(precision), int(max_iters))
    return max(float(lo), 0.0), float(hi), int(it), bool(ok), v


def enclose_matrix(a, precision=DEFAULT_PRECISION, max_iters=DEFAULT_MAX_ITERS) -> Enclosure:
    """Enclosure for a dense nonnegative integer matrix (testing convenience)."""
    from growthbound.exponent import TaskSpec

    a = np.asarray(a)
    src, dst = np.nonzero(a)
    g = FactorGraph(
        spec=TaskSpec(k=2, exponent="2", m=1),
        order=0,
        states=np.zeros((a.shape[0], 0), dtype=np.uint8),
        src=src.astype(np.int64),
        dst=dst.astype(np.int64),
        weight=a[src, dst].astype(np.int64),
        symmetric=False,
    )
    return spectral_enclosure(g, precision, max_iters)


def spectral_enclosure(g: FactorGraph, precision: float = DEFAULT_PRECISION, max_iters: int = DEFAULT_MAX_ITERS) -> Enclosure:
    if precision <= 0:
        raise ValueError("precision must be positive")
    if g.n_states == 0:
        return Enclosure(0.0, 0.0, converged=True, empty=True)
    part = scc_decompose(g)
    comp = part.component
    internal = comp[g.src] == comp[g.dst]
    e_src, e_dst, e_w = g.src[internal], g.dst[internal], g.weight[internal]
    e_comp = comp[e_src]
    local = np.empty(g.n_states, dtype=np.int64)
    for members in part.components:
        local[members] = np.arange(len(members))
    by_comp = np.argsort(e_comp, kind="stable")
    bounds = np.searchsorted(e_comp[by_comp], np.arange(len(part) + 1))

    lo_all, hi_all = 0.0, 0.0
    converged = True
    iterations = 0
    for c, members in enumerate(part.components):
        sel = by_comp[bounds[c] : bounds[c + 1]]
        if sel.size == 0:
            continue  # acyclic singleton
        if members.size == 1:
            w = float(e_w[sel].sum())  # self-loop: exact
            lo_all, hi_all = max(lo_all, w), max(hi_all, w)
            continue
        rows = local[e_src[sel]]
        cols = local[e_dst[sel]]
        order = np.lexsort((cols, rows))
        rows, cols, wts = rows[order], cols[order], e_w[sel][order]
        indptr = np.zeros(members.size + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=members.size), out=indptr[1:])
        lo, hi, it, ok, _ = perron_certificate(indptr, cols, wts, precision, max_iters)
        iterations += it
        if not ok:
            converged = False
            log.warning("component %d (%d states) did not converge: [%r, %r]", c, members.size, lo, hi)
        lo_all, hi_all = max(lo_all, lo), max(hi_all, hi)
    return Enclosure(lo_all, hi_all, converged=converged, iterations=iterations)
