"""Time the compiled kernels against the numpy fallback.

Runs the four hot kernels on identical inputs, reports best-of-N wall times
and the max relative disagreement between the two backends (which should sit
at summation-order ulps).

    python benchmarks/bench_backends.py --lambda 5000 --repeat 3
"""

import argparse
import time

import numpy as np

from kondo import _kernels_py

try:
    from kondo import _kernels_cy
except ImportError:
    _kernels_cy = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def rel_gap(a, b):
    scale = np.maximum(np.abs(a), np.abs(b))
    scale[scale == 0.0] = 1.0
    return float(np.max(np.abs(a - b) / scale))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lambda", dest="lam", type=int, default=5_000,
                    help="levels per branch (default 5000)")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--gsq", type=float, default=1.0)
    args = ap.parse_args()

    if _kernels_cy is None:
        ap.error("compiled kernels are not built; nothing to compare "
                 "(pip install -e . rebuilds them)")

    omega = np.arange(1.0, args.lam + 1.0)
    roots = _kernels_py.positive_roots(omega, args.gsq)
    scan = np.linspace(0.05, args.lam + 0.4, 4 * args.lam) + 0.31  # off-pole
    coeffs = 1.0 / (1.0 + roots * roots)
    poles = np.concatenate([-roots[::-1], [0.0], roots])
    allc = np.concatenate([coeffs[::-1], [1.0], coeffs])
    ys = np.linspace(0.0, 50.0, 2 * args.lam)

    cases = [
        ("positive_roots", lambda k: k.positive_roots(omega, args.gsq)),
        ("secular_fn", lambda k: k.secular_fn(scan, omega, args.gsq)),
        ("xprime", lambda k: k.xprime(scan, omega, args.gsq)),
        ("cauchy_sum", lambda k: k.cauchy_sum(omega, poles, allc)),
        ("sigma_direct", lambda k: k.sigma_direct(ys, omega)),
    ]

    print(f"lambda={args.lam}  gsq={args.gsq}  best of {args.repeat}")
    print(f"{'kernel':<16}{'python':>10}{'cython':>10}{'speedup':>9}"
          f"{'max rel gap':>13}")
    for name, call in cases:
        t_py, out_py = best_of(lambda: call(_kernels_py), args.repeat)
        t_cy, out_cy = best_of(lambda: call(_kernels_cy), args.repeat)
        print(f"{name:<16}{t_py * 1e3:>8.2f}ms{t_cy * 1e3:>8.2f}ms"
              f"{t_py / t_cy:>8.2f}x{rel_gap(out_py, out_cy):>13.2e}")


if __name__ == "__main__":
    main()
