"""Compare the compiled and numpy kernels.

    python benchmarks/bench_kernels.py [--sizes 100 300 600] [--repeat 5]

Prints the best-of-N wall time of each kernel per backend and the speedup.
"""

import argparse
import timeit

import numpy as np

from hocle import _kernels_py

try:
    from hocle import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def _cases(n, rng):
    S = rng.uniform(0.0, 1.0, (n, n))
    S = 0.5 * (S + S.T)
    S /= np.linalg.norm(S, axis=1)[:, None]
    F = rng.standard_normal((n, 3))
    X = rng.standard_normal((n, 10))
    C = X[rng.choice(n, 8, replace=False)]
    return {
        "affine_projection": lambda k: k.affine_projection(S),
        "von_neumann(200 sweeps)": lambda k: k.von_neumann(S, 200, 0.0),
        "pairwise_sqdist": lambda k: k.pairwise_sqdist(F),
        "nearest_centroid": lambda k: k.nearest_centroid(X, C),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 300, 600])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if _kernels_c is None:
        print("compiled kernels not built; only the numpy backend is timed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<26}{'n':>6}{'numpy [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for n in args.sizes:
        for name, fn in _cases(n, rng).items():
            t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1,
                                     repeat=args.repeat))
            if _kernels_c is None:
                print(f"{name:<26}{n:>6}{1e3 * t_py:>14.2f}{'-':>14}{'-':>10}")
                continue
            t_c = min(timeit.repeat(lambda: fn(_kernels_c), number=1,
                                    repeat=args.repeat))
            print(f"{name:<26}{n:>6}{1e3 * t_py:>14.2f}{1e3 * t_c:>14.2f}"
                  f"{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
