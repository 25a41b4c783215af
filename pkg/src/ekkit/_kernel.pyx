# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Gaussian lattice-sum kernel (same contract as _kernel_py)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sin

cnp.import_array()


cdef void _accumulate(const double complex[::1] pts, double complex zr,
                      double complex w, double A, int mmax, int nmax,
                      double complex[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t k, m, n, npts = pts.shape[0]
    cdef double complex u, lam, cu, iu, pm, t
    cdef double mag, ph
    cdef double complex qn[64]
    for m in range(mmax + 1):
        for n in range(nmax + 1):
            out[m, n] = 0
    for k in range(npts):
        lam = pts[k]
        u = lam + zr
        if u.real == 0.0 and u.imag == 0.0:
            continue
        mag = exp(-(u.real * u.real + u.imag * u.imag) / A)
        # <w, lam> = exp(2i Im(w conj(lam)) / A)
        ph = 2.0 * (w.imag * lam.real - w.real * lam.imag) / A
        cu = (u.real - 1j * u.imag) / A
        iu = 1.0 / u
        qn[0] = 1.0
        for n in range(1, nmax + 1):
            qn[n] = qn[n - 1] * iu
        pm = mag * (cos(ph) + 1j * sin(ph))
        for m in range(mmax + 1):
            for n in range(nmax + 1):
                out[m, n] += pm * qn[n]
            pm = pm * cu


def f_table(pts, double complex zr, double complex w, double A, int mmax, int nmax):
    if nmax >= 64:
        raise ValueError("nmax too large for the compiled kernel")
    cdef const double complex[::1] p = np.ascontiguousarray(pts, dtype=np.complex128)
    out = np.zeros((mmax + 1, nmax + 1), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    with nogil:
        _accumulate(p, zr, w, A, mmax, nmax, o)
    return out


def f_table_batch(pts, zrs, ws, double A, int mmax, int nmax):
    if nmax >= 64:
        raise ValueError("nmax too large for the compiled kernel")
    cdef const double complex[::1] p = np.ascontiguousarray(pts, dtype=np.complex128)
    cdef const double complex[::1] zz = np.ascontiguousarray(zrs, dtype=np.complex128)
    cdef const double complex[::1] ww = np.ascontiguousarray(ws, dtype=np.complex128)
    cdef Py_ssize_t i, nb = zz.shape[0]
    out = np.zeros((nb, mmax + 1, nmax + 1), dtype=np.complex128)
    cdef double complex[:, :, ::1] o = out
    with nogil:
        for i in range(nb):
            _accumulate(p, zz[i], ww[i], A, mmax, nmax, o[i])
    return out
