"""Timing comparison of the compiled kernel against its pure-Python twin.

Run as: python3 benchmarks/bench_backends.py [repeats]

Both backends are imported directly, so this works regardless of which one
the package selected at import time. Outputs per-call times and the
compiled-over-pure speedup for the three hot surfaces.
"""

import sys
import time

from procasphere import _core_py as pure

try:
    from procasphere import _core as compiled
except ImportError:
    compiled = None


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        n = fn()
        best = min(best, (time.perf_counter() - t0) / n)
    return best


def bench_family(mod):
    grid = [(l, z) for l in (1, 5, 20, 80) for z in (0.05, 2.0, 40.0, 900.0)]

    def run():
        for l, z in grid:
            mod.family(l, z)
        return len(grid)

    return run


def bench_log_delta(mod):
    grid = [(l, xi) for l in (1, 4, 12) for xi in (0.1, 1.0, 6.0, 25.0)]

    def run():
        for l, xi in grid:
            mod.log_delta_point(l, xi, 0.5, 1.5, 2)
        return len(grid)

    return run


def bench_nodes(mod):
    xs = [0.02 * 1.3 ** i for i in range(30)]

    def run():
        mod.log_delta_nodes(6, 0.5, 1.5, 2, xs)
        return len(xs)

    return run


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    if compiled is None:
        print("compiled kernel not available; nothing to compare")
        return 1
    cases = (
        ("riccati-bessel family", bench_family),
        ("mode factor, single point", bench_log_delta),
        ("mode factor, 30-node batch", bench_nodes),
    )
    print(f"{'surface':<28} {'pure':>12} {'compiled':>12} {'speedup':>9}")
    for name, make in cases:
        tp = _time(make(pure), repeats)
        tc = _time(make(compiled), repeats)
        print(f"{name:<28} {tp * 1e6:>10.2f}us {tc * 1e6:>10.2f}us "
              f"{tp / tc:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
