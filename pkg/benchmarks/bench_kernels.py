"""Timing of the compiled and pure-Python flux kernels.

Usage::

    python benchmarks/bench_kernels.py --points 100000 --repeat 20
"""

import argparse
import timeit

import numpy as np

from usbp_dg import kernels
from usbp_dg.physics import primitive_to_conserved

CASES = {
    "euler_flux_2d": lambda u, nx, ny, b: kernels.euler_flux_2d(u, nx, ny, backend=b),
    "steger_warming_2d": lambda u, nx, ny, b: kernels.steger_warming_2d(u, nx, ny, backend=b),
    "van_leer_haenel_2d": lambda u, nx, ny, b: kernels.van_leer_haenel_2d(u, nx, ny, backend=b),
    "van_leer_haenel_1d": lambda u, nx, ny, b: kernels.van_leer_haenel_1d(u[[0, 1, 3]], backend=b),
}


def random_states(n, seed):
    rng = np.random.default_rng(seed)
    rho = rng.uniform(0.5, 2.0, n)
    vel = (rng.uniform(-1.5, 1.5, n), rng.uniform(-1.5, 1.5, n))
    p = rng.uniform(0.5, 2.0, n)
    theta = rng.uniform(0.0, 2 * np.pi, n)
    return primitive_to_conserved(rho, vel, p), np.cos(theta), np.sin(theta)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    u, nx, ny = random_states(args.points, args.seed)
    backends = ["python"] + (["native"] if kernels.NATIVE_AVAILABLE else [])
    print(f"points={args.points} repeat={args.repeat} backends={','.join(backends)}")
    print(f"{'kernel':<20} {'python [ms]':>12} {'native [ms]':>12} {'speedup':>8} {'max diff':>10}")
    for name, fn in CASES.items():
        times, outs = {}, {}
        for b in backends:
            outs[b] = fn(u, nx, ny, b)
            best = min(timeit.repeat(lambda: fn(u, nx, ny, b), number=1, repeat=args.repeat))
            times[b] = 1e3 * best
        if "native" in times:
            diff = max(np.abs(a - c).max() for a, c in zip(np.atleast_1d(outs["python"]),
                                                           np.atleast_1d(outs["native"])))
            print(f"{name:<20} {times['python']:>12.2f} {times['native']:>12.2f} "
                  f"{times['python'] / times['native']:>8.1f} {diff:>10.1e}")
        else:
            print(f"{name:<20} {times['python']:>12.2f} {'n/a':>12} {'n/a':>8} {'n/a':>10}")


if __name__ == "__main__":
    main()
