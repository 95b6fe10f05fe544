"""Benchmark: compiled simplex kernel against the pure-Python fallback.

Usage:
    python3 benchmarks/bench_solver.py [--sizes 50,100,200,500] [--seed 0]

Each instance has uniform-random costs and strictly positive random
marginals.  Both kernels solve the same arrays; the table reports wall
time, pivot counts, and the cost gap between the two solutions.
"""

import argparse
import time

import numpy as np

from finiteot.solver import _core_py

try:
    from finiteot.solver import _core
except ImportError:
    _core = None


def make_instance(rng, n, m):
    a = rng.random(n) + 0.05
    a /= a.sum()
    b = rng.random(m) + 0.05
    b /= b.sum()
    C = rng.uniform(0.0, 20.0, size=(n, m))
    return a, b, C


def run(kernel, a, b, C):
    t0 = time.perf_counter()
    flow, iterations = kernel.solve_dense(a, b, C, 1e-9)
    elapsed = time.perf_counter() - t0
    return elapsed, iterations, float((flow * C).sum())


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="50,100,200,500")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)

    if _core is None:
        print("compiled kernel unavailable; timing the fallback only")
    header = f"{'n':>5} {'kernel':>9} {'time (s)':>10} {'pivots':>8} {'cost':>14}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        a, b, C = make_instance(rng, n, n)
        rows = [("python", _core_py)]
        if _core is not None:
            rows.insert(0, ("compiled", _core))
        costs = {}
        for name, kernel in rows:
            elapsed, pivots, cost = run(kernel, a, b, C)
            costs[name] = cost
            print(f"{n:>5} {name:>9} {elapsed:>10.3f} {pivots:>8} {cost:>14.8f}")
        if len(costs) == 2:
            gap = abs(costs["compiled"] - costs["python"])
            print(f"{'':>5} {'gap':>9} {gap:>10.2e}")


if __name__ == "__main__":
    main()
