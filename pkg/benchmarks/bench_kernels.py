"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Workloads: canonical search on a batch of weight-3 pointed graphs with all
colours equal (the worst case for the search), and truncated products of
two-variable jets at a few truncation orders.
"""
from __future__ import annotations

import argparse
import statistics
import sys
import time

import numpy as np

from weylgraphs import kernels
from weylgraphs.enumeration import semistable_graphs


def _time(fn, repeat: int) -> float:
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def canon_workload(backend, graphs):
    cases = [(G.n, [list(r) for r in G.matrix], [0] * G.n) for G in graphs]

    def run():
        for n, mat, colors in cases:
            backend.canon_search(n, mat, colors)

    return run


def mul_workload(backend, order: int, reps: int):
    rng = np.random.default_rng(0)
    a = rng.normal(size=(order + 1, order + 1)) + 1j * rng.normal(size=(order + 1, order + 1))
    b = rng.normal(size=(order + 1, order + 1)) + 1j * rng.normal(size=(order + 1, order + 1))

    def run():
        for _ in range(reps):
            backend.mul2(a, b, order)

    return run


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--graphs", type=int, default=400, help="number of weight-3 graphs for canonical search")
    a = p.parse_args(argv)
    if kernels.compiled_backend is None:
        print("compiled extension not available; only the Python backend can be timed")
    graphs = list(semistable_graphs(3, pointed=True))[: a.graphs]
    rows = [("canon_search", f"{len(graphs)} graphs", lambda b: canon_workload(b, graphs))]
    rows += [("mul2", f"order {d}", (lambda d: lambda b: mul_workload(b, d, 50))(d)) for d in (8, 16, 24)]
    print(f"{'kernel':14s} {'workload':14s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}")
    for name, label, make in rows:
        tp = _time(make(kernels.python_backend), a.repeat)
        if kernels.compiled_backend is not None:
            tc = _time(make(kernels.compiled_backend), a.repeat)
            print(f"{name:14s} {label:14s} {tp:10.4f} {tc:11.4f} {tp / tc:7.1f}x")
        else:
            print(f"{name:14s} {label:14s} {tp:10.4f} {'-':>11s} {'-':>8s}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
