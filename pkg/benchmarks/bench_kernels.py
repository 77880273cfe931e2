"""Compare the compiled kernels against the numpy/Python fallback.

    python benchmarks/bench_kernels.py [--length 8192] [--repeat 5]

Reports best-of-``repeat`` wall time for each kernel on both backends, the
speedup, and the largest relative difference between their outputs.
"""

import argparse
import time

import numpy as np

from weekday_mfdfa import _fallback
from weekday_mfdfa.core import _detrend_basis, default_scale_grid, integrate_profile

try:
    from weekday_mfdfa import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_variances(impl, profile, scales, order):
    def run():
        return [impl.segment_variances(profile, int(n), _detrend_basis(int(n), order), True)
                for n in scales]
    return run


def bench_swaps(impl, values, first, second):
    def run():
        buf = values.copy()
        impl.apply_transpositions(buf, first, second)
        return buf
    return run


def flat(out):
    return np.concatenate(out) if isinstance(out, list) else out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--length", type=int, default=8192)
    parser.add_argument("--swaps", type=int, default=2_000_000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--order", type=int, default=2)
    args = parser.parse_args()

    if _kernels is None:
        print("compiled extension not built; only the fallback is available")
        return 1

    rng = np.random.default_rng(0)
    x = rng.standard_normal(args.length)
    profile = integrate_profile(x).values
    scales = default_scale_grid(args.length).scales
    first = rng.integers(0, args.length, args.swaps, dtype=np.int64)
    second = rng.integers(0, args.length, args.swaps, dtype=np.int64)

    cases = [
        ("segment_variances (all scales)",
         bench_variances(_kernels, profile, scales, args.order),
         bench_variances(_fallback, profile, scales, args.order)),
        (f"apply_transpositions ({args.swaps} swaps)",
         bench_swaps(_kernels, x, first, second),
         bench_swaps(_fallback, x, first, second)),
    ]
    print(f"N={args.length}, best of {args.repeat}")
    print(f"{'kernel':<40}{'compiled [s]':>14}{'fallback [s]':>14}{'speedup':>10}{'max rel diff':>14}")
    for name, fast, slow in cases:
        t_fast, out_fast = best_of(fast, args.repeat)
        t_slow, out_slow = best_of(slow, args.repeat)
        a, b = flat(out_fast), flat(out_slow)
        diff = np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300))
        print(f"{name:<40}{t_fast:>14.4f}{t_slow:>14.4f}{t_slow / t_fast:>10.1f}{diff:>14.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
