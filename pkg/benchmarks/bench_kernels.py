"""Time the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--points N] [--repeat R]
"""

from __future__ import annotations

import argparse
import random
import sys
import timeit
from fractions import Fraction

from tropcong.kernels import CellSet, PointBatch, compiled_available, rat_values, use_backend
from tropcong.polyhedra import random_point
from tropcong.tropical import TropicalPoly, TropicalRational


def _poly(rng, n, k):
    return TropicalPoly(n, [(tuple(rng.randint(-3, 3) for _ in range(n)), Fraction(rng.randint(-20, 20), 4)) for _ in range(k)])


def workloads(n_points: int, seed: int = 0):
    rng = random.Random(seed)
    out = []
    for n in (2, 3):
        batch = PointBatch([random_point(rng, n) for _ in range(n_points)])
        f = TropicalRational(_poly(rng, n, 40), _poly(rng, n, 20))
        out.append((f"rat_values n={n} terms=40/20", lambda f=f, b=batch: rat_values(f, b)))
        cells = [[(tuple(rng.randint(-2, 2) for _ in range(n)), Fraction(rng.randint(-6, 6), 2)) for _ in range(6)] for _ in range(30)]
        cs = CellSet(cells, n)
        out.append((f"locate n={n} cells=30", lambda cs=cs, b=batch: cs.locate(b)))
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not compiled_available():
        print("compiled kernels are not built; only the Python backend can run", file=sys.stderr)
        return 1
    print(f"{'workload':32s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in workloads(args.points):
        times = {}
        for backend in ("python", "cython"):
            with use_backend(backend):
                fn()  # warm caches (numpy arrays, etc.)
                times[backend] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        py, cy = times["python"], times["cython"]
        print(f"{name:32s} {py:10.4f} {cy:10.4f} {py / cy:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
