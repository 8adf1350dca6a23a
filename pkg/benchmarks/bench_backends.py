"""Timing comparison of the compiled and pure-Python kernel backends.

Usage:  python benchmarks/bench_backends.py [--sizes 16,32,64] [--full]

Times LU factorization + solve and the power-iteration spectral norm on
random complex matrices for every available backend.  The pure-Python
backend is skipped above 128 rows unless --full is given (it is a few
hundred times slower; that gap is why the compiled core exists).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from matfunc.backend import available
from matfunc.rng import SplitMix64

PY_SIZE_LIMIT = 128


def _best_of(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(sizes, full):
    backends = available()
    rng = SplitMix64(2024)
    print(f"{'op':<12}{'n':>6}" + "".join(f"{name:>14}" for name in backends) + f"{'speedup':>10}")
    for n in sizes:
        a = rng.complex_matrix(n)
        b = rng.complex_vector(n)
        rows = {}
        for name, mod in backends.items():
            if name == "python" and n > PY_SIZE_LIMIT and not full:
                rows[name] = None
                continue
            lu, piv, fail = mod.lu_factor(a)
            assert fail == -1
            rows[name] = _best_of(lambda m=mod: m.lu_solve_factored(*m.lu_factor(a)[:2], b))
        _print_row("lu+solve", n, rows, backends)
        rows = {}
        for name, mod in backends.items():
            if name == "python" and n > PY_SIZE_LIMIT and not full:
                rows[name] = None
                continue
            rows[name] = _best_of(lambda m=mod: m.power_sigma(a, 1e-10, 10000))
        _print_row("power-sigma", n, rows, backends)


def _print_row(op, n, rows, backends):
    cells = []
    for name in backends:
        t = rows.get(name)
        cells.append(f"{'-':>14}" if t is None else f"{t * 1e3:>12.2f}ms")
    times = [t for t in rows.values() if t is not None]
    speed = ""
    if len(times) == 2 and min(times) > 0:
        speed = f"{max(times) / min(times):>9.1f}x"
    print(f"{op:<12}{n:>6}" + "".join(cells) + speed)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="16,32,64,128,256")
    ap.add_argument("--full", action="store_true",
                    help="run the pure-Python backend at every size")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    bench(sizes, args.full)


if __name__ == "__main__":
    main()
