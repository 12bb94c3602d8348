"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both paths are always importable; the env flag only changes which one the
dispatchers pick, so this script calls each implementation directly.
"""

import argparse
import math
import timeit

import numpy as np

from qqw import kernels as K
from qqw._accel import NUMBA_AVAILABLE


def cases():
    rng = np.random.default_rng(0)
    tab16 = rng.integers(0, 2, 1 << 16).astype(np.int64)
    tab10 = rng.integers(0, 2, 1 << 10).astype(np.int8)
    N = 4096
    sizes = K.bbht_schedule(N, 1.2, 200)
    thetas = np.arcsin(np.sqrt(np.arange(1, 257) / N))
    return [
        ("mobius N=16", K.mobius_np, K.mobius_nb, (tab16,)),
        ("sensitivity N=16", K.sensitivity_np, K.sensitivity_nb, (tab16.astype(np.int8),)),
        ("decision tree depth N=10", K.dt_depth_np, K.dt_depth_nb, (tab10, 10)),
        ("bbht failure N=4096, 256 counts", K.bbht_failure_np, K.bbht_failure_nb, (thetas, sizes, 198)),
    ]


def best_of(fn, args, repeat):
    fn(*args)  # warm-up (compiles the numba path)
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not NUMBA_AVAILABLE:
        print("numba is not installed; only the numpy path can be timed")
    print(f"{'kernel':34s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speed-up':>9s}")
    for name, np_fn, nb_fn, fargs in cases():
        t_np = best_of(np_fn, fargs, args.repeat)
        t_nb = best_of(nb_fn, fargs, args.repeat) if NUMBA_AVAILABLE else math.nan
        print(f"{name:34s} {1e3 * t_np:11.3f} {1e3 * t_nb:11.3f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
