"""Compare the compiled and pure-Python kernels.

Times the branch march, the batched lift and a full period matrix with
each backend.  Run with ``python3 benchmarks/bench_kernels.py``.
"""

import argparse
import math
import timeit

import numpy as np

from trigsurf import kernels, sextic
from trigsurf.arcs import CircleArc
from trigsurf.curve import Seed, continue_branch, sextic_curve
from trigsurf.periods import branch_for, builtin_cycles, period_matrix

ROOTS = np.exp(1j * np.pi * np.arange(6) / 3)


def _march_args():
    arc = CircleArc(1, 0.0, math.pi / 3)
    kind, c, v, s = arc.packed
    t0, t1 = arc.t_range
    span = t1 - t0
    return (kind, c, v, s, ROOTS, math.pi / 6, -(2 ** (1 / 3)) + 0j, t1,
            1e-6 * span, span / 64, 1e-8)


def _lift_args(n):
    curve = sextic_curve()
    arc = CircleArc(1, 0.0, math.pi / 3)
    br = continue_branch(curve, arc, Seed(math.pi / 6, -(2 ** (1 / 3))))
    rng = np.random.default_rng(0)
    side = rng.integers(0, 2, n)
    off = np.where(side == 0, 1, -1) * 10.0 ** rng.uniform(-15, -0.5, n)
    kind, c, v, s = arc.packed
    return (kind, c, v, s, ROOTS, 0.0, math.pi / 3, br.root_left, br.root_right,
            side, off, br.anchors_t, br.anchors_w, br.anchors_p)


def _period_matrix():
    branch_for.cache_clear()
    curve = sextic_curve()
    period_matrix(curve, sextic.PHI, builtin_cycles(curve))


def bench(repeat, lift_points):
    march_args = _march_args()
    lift_args = _lift_args(lift_points)
    rows = []
    for name in kernels.available_backends():
        kernels.use_backend(name)
        cases = {
            "march": lambda: kernels.march(*march_args),
            f"lift x{lift_points}": lambda: kernels.lift(*lift_args),
            "period matrix": _period_matrix,
        }
        for label, fn in cases.items():
            fn()
            best = min(timeit.repeat(fn, number=1, repeat=repeat))
            rows.append((label, name, best))
    branch_for.cache_clear()
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--lift-points", type=int, default=20000)
    args = ap.parse_args()
    start = kernels.backend_name()
    try:
        rows = bench(args.repeat, args.lift_points)
    finally:
        kernels.use_backend(start)
    times = {(label, name): t for label, name, t in rows}
    labels = list(dict.fromkeys(label for label, _, _ in rows))
    print(f"{'kernel':<16}{'python [ms]':>14}{'compiled [ms]':>16}{'speedup':>10}")
    for label in labels:
        py = times.get((label, "python"))
        cc = times.get((label, "compiled"))
        sp = f"{py / cc:9.1f}x" if py and cc else "      n/a"
        cc_s = f"{1e3 * cc:16.2f}" if cc else f"{'n/a':>16}"
        print(f"{label:<16}{1e3 * py:14.2f}{cc_s}{sp}")


if __name__ == "__main__":
    main()
