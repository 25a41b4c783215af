"""Compare the compiled and numpy lattice-sum kernels.

    python benchmarks/bench_kernel.py [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from ekkit import _kernel_py
from ekkit.lattice import disk_points, tau_lattice

try:
    from ekkit import _kernel
except ImportError:
    _kernel = None

CASES = [
    # (label, mmax, nmax, radius)
    ("f table 2x2, R=7", 2, 2, 7.0),
    ("f table 6x6, R=7", 6, 6, 7.0),
    ("f table 12x8, R=9", 12, 8, 9.0),
]


def bench(fn, args, repeat):
    t = timeit.repeat(lambda: fn(*args), number=1, repeat=repeat)
    return min(t) * 1e3


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ns = ap.parse_args(argv)

    L = tau_lattice(0.5 + 1j)
    zr, w = 0.21 - 0.13j, 0.4 + 0.1j
    print(f"{'case':<24}{'points':>8}{'numpy ms':>11}{'cython ms':>11}{'speedup':>9}")
    for label, mmax, nmax, R in CASES:
        pts = disk_points(L, R)
        args = (pts, zr, w, L.A, mmax, nmax)
        t_py = bench(_kernel_py.f_table, args, ns.repeat)
        if _kernel is None:
            print(f"{label:<24}{len(pts):>8}{t_py:>11.3f}{'n/a':>11}{'':>9}")
            continue
        assert np.allclose(_kernel.f_table(*args), _kernel_py.f_table(*args), rtol=1e-13, atol=1e-13)
        t_cy = bench(_kernel.f_table, args, ns.repeat)
        print(f"{label:<24}{len(pts):>8}{t_py:>11.3f}{t_cy:>11.3f}{t_py / t_cy:>8.1f}x")

    pts = disk_points(L, 7.0)
    rng = np.random.default_rng(0)
    zs = rng.uniform(-0.4, 0.4, 1024) + 1j * rng.uniform(-0.4, 0.4, 1024)
    ws = rng.uniform(-0.4, 0.4, 1024) + 1j * rng.uniform(-0.4, 0.4, 1024)
    args = (pts, zs, ws, L.A, 0, 1)
    t_py = bench(_kernel_py.f_table_batch, args, max(3, ns.repeat // 4))
    label = "batch 1024 pairs, R=7"
    if _kernel is None:
        print(f"{label:<24}{len(pts):>8}{t_py:>11.3f}{'n/a':>11}")
    else:
        t_cy = bench(_kernel.f_table_batch, args, max(3, ns.repeat // 4))
        print(f"{label:<24}{len(pts):>8}{t_py:>11.3f}{t_cy:>11.3f}{t_py / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
