"""Time the compiled and numpy kernels on the same inputs.

Usage: python3 benchmarks/bench_kernels.py [--n 5] [--points 2000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from rscd import kernels
from rscd.coeffs import index_masks
from rscd.rootsys import orbit_index_sets


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    X = rng.normal(size=(args.points, args.n))
    Js = [J for r in range(1, args.n) for J in orbit_index_sets(args.n, r)]
    masks = index_masks(args.n, Js)
    W = rng.normal(size=(len(Js), args.n))
    offsets = np.arange(0, len(Js) + 1, dtype=np.intp)

    print(f"n={args.n} points={args.points} index sets={len(Js)} (best of {args.repeat})")
    times = {}
    for name, mod in kernels.BACKENDS.items():
        t1 = min(timeit.repeat(lambda: mod.coeff_products(X, masks, 0.9, 0.3), number=1, repeat=args.repeat))
        t2 = min(timeit.repeat(lambda: mod.grouped_exp_sums(X, W, offsets, 0.9), number=1, repeat=args.repeat))
        times[name] = (t1, t2)
        print(f"{name:>8}: coeff_products {t1 * 1e3:9.3f} ms   grouped_exp_sums {t2 * 1e3:9.3f} ms")
    if "cython" in times:
        py, cy = times["python"], times["cython"]
        print(f" speedup: coeff_products x{py[0] / cy[0]:.1f}   grouped_exp_sums x{py[1] / cy[1]:.1f}")
    else:
        print("compiled backend not built; run `python3 setup.py build_ext --inplace`")


if __name__ == "__main__":
    main()
