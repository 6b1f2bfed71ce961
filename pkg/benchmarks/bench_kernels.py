#!/usr/bin/env python3
"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--m 8 9 10]

Each kernel is called once untimed so JIT compilation (or loading the on-disk
cache) is excluded. Outputs of the two paths are compared before timing.
"""

import argparse
import time

import numpy as np

from growthbound import _accel
from growthbound import _kernels as K
from growthbound.exponent import TaskSpec, forbidden_length_table, parse_exponent
from growthbound.graph import FactorGraph, build_graph, scc_decompose


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def largest_block(g: FactorGraph):
    part = scc_decompose(g)
    members = max(part.components, key=len)
    local = np.full(g.n_states, -1, dtype=np.int64)
    local[members] = np.arange(len(members))
    keep = (local[g.src] >= 0) & (local[g.dst] >= 0)
    rows, cols, w = local[g.src[keep]], local[g.dst[keep]], g.weight[keep].astype(np.float64)
    order = np.lexsort((cols, rows))
    indptr = np.zeros(len(members) + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=len(members)), out=indptr[1:])
    return indptr, cols[order], w[order]


def bench_spec(spec: TaskSpec, repeat: int):
    flen = np.array(forbidden_length_table(spec.exponent, spec.m), dtype=np.int64)
    order = int(flen[spec.m]) - 1
    args = (spec.k, order, flen, spec.m, spec.symmetry, spec.state_cap)
    states = K._enumerate_states_nb(*args)[0]
    assert np.array_equal(states, K._enumerate_states_np(*args)[0])
    edge_args = (states, spec.k, flen, spec.m, spec.symmetry)
    for a, b in zip(K._build_edges_nb(*edge_args), K._build_edges_np(*edge_args)):
        assert np.array_equal(a, b)
    _accel.MIN_WORK = 0
    block = largest_block(build_graph(spec))
    power = (*block, 1e-9, 1_000_000)
    rows = [
        ("enumerate", lambda: K._enumerate_states_nb(*args), lambda: K._enumerate_states_np(*args)),
        ("edges", lambda: K._build_edges_nb(*edge_args), lambda: K._build_edges_np(*edge_args)),
        ("power", lambda: K._power_iterate_nb(*power), lambda: K._power_iterate_np(*power)),
    ]
    return len(states), [(name, best_of(nb, repeat), best_of(np_, repeat)) for name, nb, np_ in rows]


def bench_brute(k, e, n, repeat):
    ex = parse_exponent(e)
    flen = np.array(forbidden_length_table(ex, n), dtype=np.int64)
    a = K._brute_count_nb(k, n, flen, n, 10**9)
    b = K.brute_count_py(k, n, flen, n, 10**9)
    assert np.array_equal(a[0], b[0])
    return best_of(lambda: K._brute_count_nb(k, n, flen, n, 10**9), repeat), best_of(
        lambda: K.brute_count_py(k, n, flen, n, 10**9), repeat
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--m", type=int, nargs="+", default=[8, 9, 10])
    ap.add_argument("--brute-length", type=int, default=18)
    a = ap.parse_args()
    if _accel.numba is None:
        raise SystemExit("numba is not installed")

    print(f"{'case':<32}{'kernel':<11}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    for m in a.m:
        spec = TaskSpec(k=2, exponent=parse_exponent("3"), m=m)
        n, rows = bench_spec(spec, a.repeat)
        for name, t_nb, t_np in rows:
            print(f"{f'cube-free m={m} ({n} states)':<32}{name:<11}{t_nb:>10.4f}{t_np:>10.4f}{t_np / t_nb:>8.1f}x")
    t_nb, t_np = bench_brute(3, "2", a.brute_length, a.repeat)
    print(f"{f'square-free k=3 n={a.brute_length}':<32}{'brute':<11}{t_nb:>10.4f}{t_np:>10.4f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
