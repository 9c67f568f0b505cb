"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--n 8] [--repeat 5]

Both paths are called explicitly, so ``BMENET_NO_NUMBA`` has no effect here.
The first numba call (compilation) is excluded from the timings.
"""

import argparse
import time

import numpy as np

from bmenet import _kernels
from bmenet.enumeration import _orbit_perms, canonical_orderings, enumerate_diagonal_sets
from bmenet.vectors import pair_index_array


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(n):
    orders = canonical_orderings(n)
    dset = next(enumerate_diagonal_sets(n, n - 3))
    perms = _orbit_perms(n, dset)
    pidx = pair_index_array(n)
    rng = np.random.default_rng(0)
    npairs = n * (n - 1) // 2
    x = rng.integers(0, 2 ** (n - 2), size=(len(orders), npairs))
    d = rng.integers(0, 1000, size=npairs)
    dmat = rng.integers(0, 20, size=(n + 1, n + 1))
    dmat = dmat + dmat.T
    np.fill_diagonal(dmat, 0)
    return {
        "self_canonical_mask": lambda fast: _kernels.self_canonical_mask(orders, perms, use_numba=fast),
        "orbit_incidence": lambda fast: _kernels.orbit_incidence(orders, perms, pidx, use_numba=fast),
        "row_dots": lambda fast: _kernels.row_dots(x, d, use_numba=fast),
        "kalmanson_mask": lambda fast: _kernels.kalmanson_mask(orders, dmat, use_numba=fast),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=8)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; pip install 'bmenet[fast]'")
    print(f"n={args.n}, {len(canonical_orderings(args.n))} canonical orderings, best of {args.repeat}")
    print(f"{'kernel':<22}{'numpy (ms)':>12}{'numba (ms)':>12}{'speedup':>10}")
    for name, fn in cases(args.n).items():
        assert np.array_equal(fn(True), fn(False)), name
        slow = best_of(lambda: fn(False), args.repeat)
        fast = best_of(lambda: fn(True), args.repeat)
        print(f"{name:<22}{slow * 1e3:>12.2f}{fast * 1e3:>12.2f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
