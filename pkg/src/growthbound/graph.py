"""Factor (Rauzy) graphs of the period-capped approximation languages.

States are the allowed words of length ``order = forbidden_length(e, m) - 1``.
Appending a letter to a state and dropping its first letter moves along an
edge, provided the extended word does not end with a forbidden power of
period at most ``m``. Every forbidden power with period ``<= m`` has length
``<= order + 1``, so this one-window check is exact: walks of length ``t``
correspond one-to-one to allowed words of length ``order + t``.

With ``symmetry`` on, states are first-occurrence canonical forms and an edge
weight counts the letters leading into the successor class.
"""

from __future__ import annotations

import heapq
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from growthbound import _accel
from growthbound import _kernels as K
from growthbound.exponent import TaskSpec, forbidden_length_table, parse_exponent

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class ResourceError(RuntimeError):
    """A build hit its state cap."""

    def __init__(self, message: str, partial_count: int):
        super().__init__(message)
        self.partial_count = partial_count


class GraphConsistencyError(RuntimeError):
    pass


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FactorGraph:
    spec: TaskSpec
    order: int
    states: np.ndarray  # (n_states, order) uint8, lexicographically sorted
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    symmetric: bool
    _indptr: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        for name in ("states", "src", "dst", "weight"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        counts = np.bincount(self.src, minlength=self.n_states) if self.n_states else np.zeros(0, np.int64)
        indptr = np.zeros(self.n_states + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        object.__setattr__(self, "_indptr", _frozen(indptr))

    @property
    def n_states(self) -> int:
        return int(self.states.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.src.shape[0])

    @property
    def k(self) -> int:
        return self.spec.k

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    def label(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.states[i])

    def orbit_sizes(self) -> np.ndarray:
        """Number of words represented by each state (1 without symmetry)."""
        if not self.symmetric:
            return np.ones(self.n_states, dtype=object)
        if self.order == 0:
            distinct = np.zeros(self.n_states, dtype=np.int64)
        else:
            distinct = self.states.max(axis=1).astype(np.int64) + 1
        k = self.k
        return np.array([math.perm(k, int(d)) for d in distinct], dtype=object)

    def dense(self) -> np.ndarray:
        a = np.zeros((self.n_states, self.n_states), dtype=np.int64)
        np.add.at(a, (self.src, self.dst), self.weight)
        return a

    def __eq__(self, other):
        if not isinstance(other, FactorGraph):
            return NotImplemented
        return self.serialize() == other.serialize()

    def __hash__(self):
        return hash(self.serialize())

    # -- cache format ------------------------------------------------------

    def serialize(self) -> str:
        e = self.spec.exponent
        out = io.StringIO()
        out.write(
            f"{self.k} {e.numerator} {e.denominator} {int(e.strict)} {self.spec.m} "
            f"{int(self.symmetric)} {self.order} {self.n_states} {self.n_edges}\n"
        )
        lut = np.frombuffer(DIGITS.encode("ascii"), dtype=np.uint8)
        if self.n_states:
            rows = lut[self.states]
            nl = np.full((self.n_states, 1), ord("\n"), dtype=np.uint8)
            out.write(np.hstack([rows, nl]).tobytes().decode("ascii"))
        if self.n_edges:
            lines = np.char.add(
                np.char.add(np.char.add(self.src.astype(str), " "), np.char.add(self.dst.astype(str), " ")),
                self.weight.astype(str),
            )
            out.write("\n".join(lines.tolist()))
            out.write("\n")
        return out.getvalue()

    @classmethod
    def deserialize(cls, text: str, spec: TaskSpec | None = None) -> FactorGraph:
        lines = text.split("\n")
        head = lines[0].split()
        if len(head) != 9:
            raise ValueError("bad factor graph header")
        k, a, b, strict, m, sym, order, n_states, n_edges = (int(x) for x in head)
        if spec is None:
            exp = parse_exponent(f"{a}/{b}" + ("+" if strict else ""))
            spec = TaskSpec(k=k, exponent=exp, m=m, symmetry=bool(sym))
        else:
            e = spec.exponent
            if (k, a, b, strict, m, sym) != (spec.k, e.numerator, e.denominator, int(e.strict), spec.m, int(spec.symmetry)):
                raise ValueError(f"serialized graph is not for {spec.key()}")
        body = lines[1:]
        if len(body) < n_states + n_edges:
            raise ValueError("truncated factor graph")
        state_lines = body[:n_states]
        states = np.zeros((n_states, order), dtype=np.uint8)
        if n_states and order:
            raw = np.frombuffer("".join(state_lines).encode("ascii"), dtype=np.uint8).reshape(n_states, order)
            lut = np.full(256, 255, dtype=np.uint8)
            lut[np.frombuffer(DIGITS.encode("ascii"), dtype=np.uint8)] = np.arange(len(DIGITS))
            states = lut[raw]
            if (states >= k).any():
                raise ValueError("state label letter out of range")
        if n_edges:
            edges = np.array(" ".join(body[n_states : n_states + n_edges]).split(), dtype=np.int64).reshape(n_edges, 3)
        else:
            edges = np.zeros((0, 3), dtype=np.int64)
        return cls(
            spec=spec,
            order=order,
            states=states,
            src=edges[:, 0].copy(),
            dst=edges[:, 1].copy(),
            weight=edges[:, 2].copy(),
            symmetric=bool(sym),
        )


def canonical_form(w: Sequence[int], k: int) -> tuple[int, ...]:
    """Relabel letters by order of first occurrence.

    >>> canonical_form([2, 1, 0, 2], 3)
    (0, 1, 2, 0)
    """
    remap: dict[int, int] = {}
    out = []
    for c in w:
        c = int(c)
        if not 0 <= c < k:
            raise ValueError(f"letter {c} outside alphabet of size {k}")
        if c not in remap:
            remap[c] = len(remap)
        out.append(remap[c])
    return tuple(out)


def build_graph(spec: TaskSpec) -> FactorGraph:
    """Build the factor graph of the ``(k, e, m)`` approximation language."""
    flen = np.array(forbidden_length_table(spec.exponent, spec.m), dtype=np.int64)
    order = int(flen[spec.m]) - 1
    if order > 255 * 64:
        raise OverflowError(f"state order {order} too large")
    # enumeration touches up to min(k**order, cap) prefixes
    work = spec.state_cap if order * np.log2(spec.k) > 40 else min(spec.k**order, spec.state_cap)
    if _accel.use_numba(work * order):
        states, n, exceeded = K._enumerate_states_nb(spec.k, order, flen, spec.m, spec.symmetry, spec.state_cap)
    else:
        states, n, exceeded = K._enumerate_states_np(spec.k, order, flen, spec.m, spec.symmetry, spec.state_cap)
    if exceeded:
        raise ResourceError(f"state cap {spec.state_cap} exceeded for {spec.key()}", int(n))
    if n >= np.iinfo(np.int64).max // max(spec.k, 1):
        raise OverflowError("state index overflow")
    if _accel.use_numba(int(n) * spec.k * max(order, 1)):
        src, dst, wt, bad = K._build_edges_nb(states, spec.k, flen, spec.m, spec.symmetry)
    else:
        src, dst, wt, bad = K._build_edges_np(states, spec.k, flen, spec.m, spec.symmetry)
    if bad >= 0:
        raise GraphConsistencyError(f"successor of state {bad} missing from the state set")
    return FactorGraph(spec=spec, order=order, states=states, src=src, dst=dst, weight=wt, symmetric=spec.symmetry)


@dataclass(frozen=True)
class SccPartition:
    component: np.ndarray  # component id per state
    components: list  # member state indices per component, ascending
    topo_order: list  # component ids, sources before sinks

    def __len__(self):
        return len(self.components)


def scc_decompose(g: FactorGraph) -> SccPartition:
    n = g.n_states
    if n == 0:
        return SccPartition(np.zeros(0, dtype=np.int64), [], [])
    if _accel.use_numba(n + g.n_edges):
        raw, ncomp = K._tarjan_nb(g.indptr, g.dst)
    else:
        raw, ncomp = K._scc_np(g.indptr, g.dst)
    # renumber so that ids follow the smallest member state index
    _, first = np.unique(raw, return_index=True)
    new_id = np.empty(ncomp, dtype=np.int64)
    new_id[np.argsort(first, kind="stable")] = np.arange(ncomp)
    comp = new_id[raw]
    order = np.argsort(comp, kind="stable")
    bounds = np.searchsorted(comp[order], np.arange(ncomp + 1))
    members = [order[bounds[c] : bounds[c + 1]] for c in range(ncomp)]
    cu, cv = comp[g.src], comp[g.dst]
    cross = cu != cv
    pairs = np.unique(cu[cross] * ncomp + cv[cross])
    succ: list[list[int]] = [[] for _ in range(ncomp)]
    indeg = np.zeros(ncomp, dtype=np.int64)
    for p in pairs.tolist():
        a, b = divmod(p, ncomp)
        succ[a].append(b)
        indeg[b] += 1
    heap = [c for c in range(ncomp) if indeg[c] == 0]
    heapq.heapify(heap)
    topo = []
    while heap:
        c = heapq.heappop(heap)
        topo.append(c)
        for d in succ[c]:
            indeg[d] -= 1
            if indeg[d] == 0:
                heapq.heappush(heap, d)
    return SccPartition(comp, members, topo)
