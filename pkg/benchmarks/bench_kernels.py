"""Compiled vs pure-Python tridiagonal kernels.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from dipolelab import _tridiag_py
from dipolelab.radial import RadialProblem, build_pencil

try:
    from dipolelab import _tridiag as _compiled
except ImportError:
    _compiled = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    disk = build_pencil(RadialProblem(1.0, 0.0, 1.0, 8000))
    tower = build_pencil(RadialProblem(-4.0, 1.0, 1e6, 4000, "logarithmic"))
    x0 = np.linspace(0.5, 1.5, 8000)

    def lam(impl):
        return float(impl.bisect_levels(disk.diag, disk.off, disk.weight, 0.0, 1e9, 0, 1)[0])

    yield "sturm_count (n=8000)", lambda k: k.sturm_count(disk.diag, disk.off, disk.weight, 30.0)
    yield "bisect 3 disk levels (n=8000)", lambda k: k.bisect_levels(disk.diag, disk.off, disk.weight, 0.0, 1e9, 0, 3)
    yield "bisect 8 tower levels (n=4000)", lambda k: k.bisect_levels(tower.diag, tower.off, tower.weight, -100.0, 0.0, 0, 8)
    yield "inverse iteration (n=8000)", lambda k: k.inverse_iteration(disk.diag, disk.off, disk.weight, lam(k), x0, 3)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'kernel':34s} {'python [s]':>11s} {'compiled [s]':>13s} {'speedup':>8s}")
    for name, fn in cases():
        tp = best_of(lambda: fn(_tridiag_py), args.repeat)
        if _compiled is None:
            print(f"{name:34s} {tp:11.4f} {'n/a':>13s} {'n/a':>8s}")
            continue
        tc = best_of(lambda: fn(_compiled), args.repeat)
        print(f"{name:34s} {tp:11.4f} {tc:13.6f} {tp / tc:7.0f}x")


if __name__ == "__main__":
    main()
