"""Classical elliptic functions used as independent oracles.

Eisenstein series come from Lambert q-series for the normalized lattice
Z + Z*tau, rescaled by homogeneity.  The Weierstrass functions use the
Laurent expansion at 0 after reducing the argument modulo the half-lattice,
with the addition theorem at the three half periods.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .lattice import Lattice, classify, points_near


class DomainError(ValueError):
    """Input outside the region where a series is declared valid."""


KRON_STRIP = (0.05, 0.45)


def check_tau(tau) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError("tau must lie in the upper half-plane")
    return tau


def theta(z, tau, tol=1e-14):
    """Jacobi theta sum over n of exp(pi i tau n^2 + 2 pi i n z)."""
    tau = check_tau(tau)
    z = complex(z)
    t, y = tau.imag, abs(z.imag)
    # log term bound: -pi t n^2 + 2 pi y n < log(tol/10)
    target = math.log(tol / 10)
    N = 1
    while -math.pi * t * N * N + 2 * math.pi * y * N > target:
        N += 1
    n = np.arange(-N, N + 1)
    return complex(np.sum(np.exp(1j * math.pi * tau * n * n + 2j * math.pi * n * z)))


def _q_terms(tau: complex, power: int, tol: float) -> complex:
    """Lambert series sum_{d>=1} d^power q^d / (1 - q^d), q = e(tau)."""
    q = np.exp(2j * math.pi * tau)
    aq = abs(q)
    s = 0j
    d = 1
    while True:
        qd = q ** d
        term = d ** power * qd / (1 - qd)
        s += term
        if d > 3 and d ** power * aq ** d < tol * 1e-3:
            break
        d += 1
        if d > 100000:
            raise DomainError("q-series did not converge; Im(tau) too small")
    return s


def _zeta_even(k2: int) -> float:
    # Riemann zeta at even integers
    from math import factorial, pi
    B = _bernoulli(k2)
    return (-1) ** (k2 // 2 + 1) * B * (2 * pi) ** k2 / (2 * factorial(k2))


@lru_cache(maxsize=64)
def _bernoulli(n: int) -> float:
    from fractions import Fraction
    A = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        A[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            A[j - 1] = j * (A[j - 1] - A[j])
    return float(A[0])


def G_normalized(two_k: int, tau, tol=1e-15) -> complex:
    """Eisenstein series of Z + Z*tau (two_k >= 4), or the ordered G2 for two_k = 2."""
    tau = check_tau(tau)
    if two_k % 2 or two_k < 2:
        raise ValueError("weight must be even and >= 2")
    c = 2 * (2j * math.pi) ** two_k / math.factorial(two_k - 1)
    return 2 * _zeta_even(two_k) + c * _q_terms(tau, two_k - 1, tol)


def eisenstein(L: Lattice, two_k: int, tol=1e-15) -> complex:
    """e_{2k}(L) = sum over nonzero lam of lam^(-2k), for 2k >= 4."""
    if two_k % 2 or two_k < 4:
        raise ValueError("eisenstein needs an even weight >= 4")
    return L.omega1 ** (-two_k) * G_normalized(two_k, L.tau, tol)


def eisenstein_direct(L: Lattice, two_k: int, R: float = 300.0, box: bool = False):
    """Brute-force lattice sum over the disk |lam| <= R (or the coordinate box)."""
    if box:
        N = int(R)
        m = np.arange(-N, N + 1, dtype=float)
        M, Nn = np.meshgrid(m, m, indexing="ij")
        lam = (M * L.omega1 + Nn * L.omega2).ravel()
    else:
        lam = points_near(L, 0j, R)
    lam = lam[lam != 0]
    # sum in magnitude order to limit rounding drift
    lam = lam[np.argsort(-np.abs(lam))]
    return complex(np.sum(lam ** (-two_k)))


def eisenstein2(L: Lattice, tol=1e-15) -> complex:
    """Ordered sum over m (coefficient of omega2) outer, n inner of (m w2 + n w1)^-2."""
    return L.omega1 ** (-2) * G_normalized(2, L.tau, tol)


def eisenstein2_star(L: Lattice, tol=1e-15) -> complex:
    """Modified series e2* = e2 - A^-1 conj(omega1)/omega1."""
    return eisenstein2(L, tol) - np.conj(L.omega1) / (L.A * L.omega1)


def eisenstein2_swapped(L: Lattice, tol=1e-15) -> complex:
    """The same double sum with the roles of the generators exchanged."""
    # outer index on omega1 equals the ordered sum for the basis (omega2, -omega1)
    return L.omega2 ** (-2) * G_normalized(2, -L.omega1 / L.omega2, tol)


@lru_cache(maxsize=64)
def _laurent_G(omega1: complex, omega2: complex, kmax: int):
    """G_{2k} for k = 2..kmax via the Weierstrass coefficient recurrence."""
    L = Lattice(omega1, omega2)
    c = {2: 3 * eisenstein(L, 4), 3: 5 * eisenstein(L, 6)}
    for n in range(4, kmax + 1):
        s = sum(c[m] * c[n - m] for m in range(2, n - 1))
        c[n] = 3 * s / ((2 * n + 1) * (n - 3))
    return {k: c[k] / (2 * k - 1) for k in range(2, kmax + 1)}


def eisenstein_series_table(L: Lattice, kmax: int):
    """Dict k -> e_{2k}(L) for 2 <= k <= kmax."""
    return dict(_laurent_G(L.omega1, L.omega2, kmax))


def _kmax_for(ratio: float, tol: float) -> int:
    if ratio <= 0:
        return 4
    k = int(math.log(tol / 100) / (2 * math.log(ratio))) + 4
    return max(6, min(k, 400))


def _zeta_laurent(v: complex, L: Lattice, tol: float) -> complex:
    r = abs(v) / L.shortest
    G = _laurent_G(L.omega1, L.omega2, _kmax_for(r, tol))
    s = 1 / v
    v2 = v * v
    p = v * v2
    for k in range(2, len(G) + 2):
        s -= G[k] * p
        p *= v2
    return s


def zeta_laurent(z, L: Lattice, tol=1e-15) -> complex:
    """Laurent series of zeta at 0 without any reduction (needs |z| < shortest)."""
    z = complex(z)
    if not 0 < abs(z) < 0.95 * L.shortest:
        raise DomainError("Laurent route needs 0 < |z| < shortest lattice vector")
    return _zeta_laurent(z, L, tol)


def _p_laurent(v: complex, L: Lattice, tol: float, deriv: int) -> complex:
    r = abs(v) / L.shortest
    G = _laurent_G(L.omega1, L.omega2, _kmax_for(r, tol))
    v2 = v * v
    if deriv == 0:
        s = 1 / v2
        p = v2
        for k in range(2, len(G) + 2):
            s += (2 * k - 1) * G[k] * p
            p *= v2
        return s
    s = -2 / (v2 * v)
    p = v
    for k in range(2, len(G) + 2):
        s += (2 * k - 1) * (2 * k - 2) * G[k] * p
        p *= v2
    return s


def period_eta(L: Lattice, tol=1e-15):
    """(eta1, eta2) with eta_i = 2 zeta(omega_i / 2); Legendre: eta1 w2 - eta2 w1 = 2 pi i."""
    eta1 = G_normalized(2, L.tau, tol) / L.omega1
    eta2 = (eta1 * L.omega2 - 2j * math.pi) / L.omega1
    return eta1, eta2


@lru_cache(maxsize=64)
def _half_periods(omega1: complex, omega2: complex):
    L = Lattice(omega1, omega2)
    out = {}
    for (a, b) in ((1, 0), (0, 1), (1, 1)):
        h = (a * omega1 + b * omega2) / 2
        out[(a, b)] = _p_laurent(h, L, 1e-17, 0)
    return out


def _split_half(z: complex, L: Lattice):
    """z = v + (m w1 + n w2)/2 with (m, n) chosen to minimize |v|."""
    x1, x2 = L.coords(2 * z)
    best = None
    for m in (math.floor(x1), math.floor(x1) + 1):
        for n in (math.floor(x2), math.floor(x2) + 1):
            v = z - (m * L.omega1 + n * L.omega2) / 2
            if best is None or abs(v) < abs(best[0]):
                best = (v, m, n)
    return best


def _check_pole(z: complex, L: Lattice):
    if classify(L, z).on_lattice:
        raise DomainError("argument lies on the lattice (pole)")


def weier_zeta(z, L: Lattice, tol=1e-15) -> complex:
    """Weierstrass zeta function of L."""
    z = complex(z)
    _check_pole(z, L)
    eta1, eta2 = period_eta(L)
    v, m, n = _split_half(z, L)
    a, b = m % 2, n % 2
    # remaining full-period shift after removing the half period
    mu1, mu2 = (m - a) // 2, (n - b) // 2
    if v == 0:
        # exactly at a half period; the lattice case was rejected above
        return (a * eta1 + b * eta2) / 2 + mu1 * eta1 + mu2 * eta2
    s = _zeta_laurent(v, L, tol) + mu1 * eta1 + mu2 * eta2
    if a or b:
        eh = _half_periods(L.omega1, L.omega2)[(a, b)]
        pv = _p_laurent(v, L, tol, 0)
        dpv = _p_laurent(v, L, tol, 1)
        s += (a * eta1 + b * eta2) / 2 + 0.5 * dpv / (pv - eh)
    return s


def weier_p(z, L: Lattice, deriv: int = 0, tol=1e-15) -> complex:
    """Weierstrass p (deriv=0) or p' (deriv=1)."""
    if deriv not in (0, 1):
        raise ValueError("deriv must be 0 or 1")
    z = complex(z)
    _check_pole(z, L)
    v, m, n = _split_half(z, L)
    a, b = m % 2, n % 2
    if not (a or b):
        return _p_laurent(v, L, tol, deriv)
    e = _half_periods(L.omega1, L.omega2)
    eh = e[(a, b)]
    if v == 0:
        return eh if deriv == 0 else 0j
    others = [e[k] for k in e if k != (a, b)]
    c = (eh - others[0]) * (eh - others[1])
    pv = _p_laurent(v, L, tol, 0)
    if deriv == 0:
        return eh + c / (pv - eh)
    return -c * _p_laurent(v, L, tol, 1) / (pv - eh) ** 2


def weier_invariants(L: Lattice):
    """(g2, g3) = (60 e4, 140 e6)."""
    return 60 * eisenstein(L, 4), 140 * eisenstein(L, 6)


def Z_fn(z, L: Lattice, tol=1e-15) -> complex:
    """Lattice-periodic modification zeta(z) - x1 eta1 - x2 eta2."""
    z = complex(z)
    eta1, eta2 = period_eta(L)
    x1, x2 = L.coords(z)
    return weier_zeta(z, L, tol) - x1 * eta1 - x2 * eta2


def weier_zeta_direct(z, L: Lattice, R: float = 400.0) -> complex:
    """Defining sum 1/z + sum (1/(z+lam) - 1/lam + z/lam^2) over |lam| <= R."""
    z = complex(z)
    lam = points_near(L, 0j, R)
    lam = lam[lam != 0]
    lam = lam[np.argsort(-np.abs(lam))]
    return 1 / z + complex(np.sum(1 / (z + lam) - 1 / lam + z / lam ** 2))


def kron_strip(z, tau):
    """Coordinate beta with z = alpha + beta*tau."""
    return complex(z).imag / complex(tau).imag


def kronecker_F(z, w, tau, tol=1e-14) -> complex:
    """Kronecker double series on the strip Im z, Im w in (0.05, 0.45) Im tau."""
    tau = check_tau(tau)
    z, w = complex(z), complex(w)
    beta, delta = kron_strip(z, tau), kron_strip(w, tau)
    lo, hi = KRON_STRIP
    if not (lo < beta < hi and lo < delta < hi):
        raise DomainError("kronecker_F is only trusted on the strip 0.05 < beta, delta < 0.45")
    t = tau.imag
    N = int(math.ceil(math.log(10 / tol) / (2 * math.pi * t * min(beta, delta)))) + 1
    k = np.arange(0, N + 1)
    M, Nn = np.meshgrid(k, k, indexing="ij")
    pos = np.exp(2j * math.pi * (M * Nn * tau + M * z + Nn * w))
    k = np.arange(-N, 0)
    M, Nn = np.meshgrid(k, k, indexing="ij")
    neg = np.exp(2j * math.pi * (M * Nn * tau + M * z + Nn * w))
    return complex(-pos.sum() + neg.sum())
