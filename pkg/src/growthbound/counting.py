"""Exact word counts: walks in a factor graph and brute-force enumeration.

The two routes share only the suffix scan; the graph topology is checked
against an enumeration that never looks at it.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional

import numpy as np

from growthbound import _accel
from growthbound import _kernels as K
from growthbound.exponent import RationalExponent, forbidden_length_table, parse_exponent
from growthbound.graph import FactorGraph

DEFAULT_NODE_BUDGET = 10**8


class EnumerationGuardError(RuntimeError):
    pass


@dataclass(frozen=True)
class CountSeries:
    k: int
    exponent: RationalExponent
    m: Optional[int]
    counts: tuple

    def __getitem__(self, n):
        return self.counts[n]

    def __len__(self):
        return len(self.counts)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "count"])
        for n, c in enumerate(self.counts):
            w.writerow([n, c])
        return buf.getvalue()

    @staticmethod
    def from_csv(text: str, k: int, exponent, m=None) -> CountSeries:
        rows = list(csv.DictReader(io.StringIO(text)))
        counts = [0] * len(rows)
        for row in rows:
            counts[int(row["n"])] = int(row["count"])
        return CountSeries(k, parse_exponent(exponent), m, tuple(counts))


def brute_count(k: int, e: RationalExponent, m: Optional[int], n_max: int, node_budget: int = DEFAULT_NODE_BUDGET) -> CountSeries:
    """Count allowed words of every length up to ``n_max`` by depth-first search.

    ``m=None`` counts the power-free language itself.
    """
    e = parse_exponent(e)
    if k < 2 or n_max < 0:
        raise ValueError("need k >= 2 and n_max >= 0")
    cap = n_max if m is None else min(m, n_max)
    if cap < 1:
        return CountSeries(k, e, m, (1,))
    flen = np.array(forbidden_length_table(e, cap), dtype=np.int64)
    if _accel.use_numba(min(k ** min(n_max, 40), node_budget) * cap):
        counts, nodes, exceeded = K._brute_count_nb(k, n_max, flen, cap, node_budget)
    else:
        counts, nodes, exceeded = K.brute_count_py(k, n_max, flen, cap, node_budget)
    if exceeded:
        raise EnumerationGuardError(f"enumeration exceeded {node_budget} words")
    return CountSeries(k, e, m, tuple(int(c) for c in counts))


def graph_count(g: FactorGraph, n: int) -> int:
    """Number of words of length ``n`` in the approximation language.

    Sums orbit-weighted walk counts of length ``n - order``; exact integers.
    """
    if n < g.order:
        raise ValueError(f"length {n} is below the graph order {g.order}")
    steps = n - g.order
    if g.n_states == 0:
        return 0
    x = g.orbit_sizes()
    if g.k ** n < 2**62:
        from scipy import sparse

        # every partial sum is bounded by k**n, so int64 is exact
        mat = sparse.csr_matrix(
            (g.weight.astype(np.int64), (g.dst, g.src)), shape=(g.n_states, g.n_states)
        )
        v = x.astype(np.int64)
        for _ in range(steps):
            v = mat @ v
        return int(v.sum())
    w = g.weight.astype(object)
    for _ in range(steps):
        y = np.zeros(g.n_states, dtype=object)
        np.add.at(y, g.dst, x[g.src] * w)
        x = y
    return int(sum(x.tolist()))


def fekete_check(s) -> bool:
    """Submultiplicativity ``c[i+j] <= c[i] * c[j]`` over the available range."""
    counts = s.counts if isinstance(s, CountSeries) else tuple(s)
    n = len(counts)
    for i in range(n):
        for j in range(i, n - i):
            if counts[i + j] > counts[i] * counts[j]:
                return False
    return True
