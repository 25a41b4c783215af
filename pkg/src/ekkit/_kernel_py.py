"""Pure numpy implementation of the Gaussian lattice-sum kernel.

Used when the compiled extension is unavailable and as the reference
in the kernel benchmark.
"""
import numpy as np


def f_table(pts, zr, w, A, mmax, nmax):
    """Table T[m, n] = A^-m sum_lam conj(u)^m / u^n exp(-|u|^2/A) <w, lam>.

    Here u = lam + zr over the given lattice points; the term with u == 0
    is skipped, which is the on-lattice exclusion when zr is exactly 0.
    """
    u = np.asarray(pts, dtype=complex) + zr
    keep = u != 0
    u = u[keep]
    lam = np.asarray(pts)[keep]
    base = np.exp(-(u.real ** 2 + u.imag ** 2) / A
                  + 2j * (w * np.conj(lam)).imag / A)
    cu = np.conj(u) / A
    iu = 1.0 / u
    P = np.empty((mmax + 1, u.size), dtype=complex)
    P[0] = base
    for m in range(1, mmax + 1):
        P[m] = P[m - 1] * cu
    Q = np.empty((nmax + 1, u.size), dtype=complex)
    Q[0] = 1.0
    for n in range(1, nmax + 1):
        Q[n] = Q[n - 1] * iu
    return P @ Q.T


def f_table_batch(pts, zrs, ws, A, mmax, nmax):
    """Stack of f_table results for paired arrays of reduced points."""
    return np.stack([f_table(pts, z, w, A, mmax, nmax) for z, w in zip(zrs, ws)])
