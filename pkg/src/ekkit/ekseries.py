"""Gaussian lattice series for Eisenstein-Kronecker numbers.

f*_{m,n}(z, w) = A^-m sum_{lam != -z} conj(lam+z)^m / (lam+z)^n
                 * exp(-|lam+z|^2 / A) * <w, lam>

g*_{a,b} is a finite binomial combination of these, and the numbers
e*_{a,b} follow from g* by an index shift.  Everything is evaluated at
the reduced representative of z (and of w, in which f* is periodic);
the quasi-periodicity factor restores the original argument.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gamma, gammaincc

from . import kernel
from .lattice import (DEFAULT_SNAP, Lattice, StratifiedPoint, classify,
                      disk_points, negate, pairing, points_near)


class TruncationError(RuntimeError):
    def __init__(self, msg, tail_bound):
        super().__init__(msg)
        self.tail_bound = tail_bound


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class SeriesParams:
    tol: float = 1e-12
    max_radius: float = 60.0
    snap_eps: float = DEFAULT_SNAP

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.max_radius > 0:
            raise ValueError("max_radius must be positive")


DEFAULT = SeriesParams()


@dataclass(frozen=True)
class EKValue:
    value: complex
    radius_used: float
    tail_bound: float

    def __complex__(self):
        return complex(self.value)


def _point(L, z, p: SeriesParams) -> StratifiedPoint:
    return z if isinstance(z, StratifiedPoint) else classify(L, z, p.snap_eps)


def _log_term(r, m, n, A):
    return -m * math.log(A) + (m - n) * math.log(r) - r * r / A


def _radius(L: Lattice, mmax: int, nmin: int, nmax: int, p: SeriesParams):
    """Radius after which three shells have all terms below tol/10."""
    A = L.A
    target = math.log(p.tol / 10)
    pairs = [(m, n) for m in (0, mmax) for n in (nmin, nmax)]
    # every (m, n) term bound is unimodal in r; start beyond all peaks
    r = max([math.sqrt(max(m - n, 0) * A / 2) for m, n in pairs] + [L.shortest / 2])
    step = 0.05 * L.shortest
    while max(_log_term(r, m, n, A) for m, n in pairs) > target:
        r += step
        if r > p.max_radius:
            raise TruncationError("required radius exceeds max_radius",
                                  math.exp(max(_log_term(p.max_radius, m, n, A)
                                               for m, n in pairs)))
    R = r + 3 * L.shortest
    if R > p.max_radius:
        raise TruncationError("required radius exceeds max_radius",
                              math.exp(max(_log_term(r, m, n, A) for m, n in pairs)))
    # round up so point sets are shared between calls
    return math.ceil(R * 4) / 4


def _tail(L: Lattice, R: float, m: int, n: int) -> float:
    """Estimate of sum over |u| > R of A^-m |u|^(m-n) exp(-|u|^2/A)."""
    A = L.A
    k = m - n + 1
    s = (k + 1) / 2
    x = R * R / A
    if s > 0:
        integral = 0.5 * A ** s * gammaincc(s, x) * gamma(s)
    else:
        integral = R ** k * A / (2 * R) * math.exp(-x)
    return 2 * math.pi / L.area * A ** (-m) * integral


@lru_cache(maxsize=8192)
def _raw_table(omega1, omega2, zr, wr, mmax, nmin, nmax, tol, max_radius):
    L = Lattice(omega1, omega2)
    p = SeriesParams(tol=tol, max_radius=max_radius)
    R = _radius(L, mmax, nmin, nmax, p)
    # the reduced point lies in the centered cell, so pad by its diameter
    pad = (abs(omega1) + abs(omega2)) / 2
    pts = disk_points(L, R + pad)
    T = kernel.f_table(pts, zr, wr, L.A, mmax, nmax)
    tail = max(_tail(L, R, m, n) for m in (0, mmax) for n in (nmin, nmax))
    T.setflags(write=False)
    return T, R, tail


def f_table(z, w, L: Lattice, mmax: int, nmax: int, p: SeriesParams = DEFAULT,
            nmin: int = 0):
    """Array T[m, n] = f*_{m,n}(z, w) for m <= mmax, n <= nmax, with (R, tail)."""
    z = _point(L, z, p)
    w = _point(L, w, p)
    T, R, tail = _raw_table(L.omega1, L.omega2, z.reduced, w.reduced,
                            mmax, nmin, nmax, p.tol, p.max_radius)
    if z.shift != 0:
        T = T * pairing(L, z.shift, w.reduced)
    return T, R, tail


def tilde_factor(L: Lattice, z: complex, w: complex) -> complex:
    """exp(A^-1 z (w - conj(w)))."""
    return complex(np.exp(z * (w - np.conj(w)) / L.A))


def f_star(m: int, n: int, z, w, L: Lattice, p: SeriesParams = DEFAULT,
           variant: str = "plain") -> EKValue:
    if m < 0 or n < 0:
        raise ValueError("f* needs m, n >= 0")
    z = _point(L, z, p)
    w = _point(L, w, p)
    T, R, tail = f_table(z, w, L, m, n, p, nmin=n)
    v = T[m, n]
    if variant == "tilde":
        v = v * tilde_factor(L, z.value, w.value)
    elif variant != "plain":
        raise ValueError("variant must be 'plain' or 'tilde'")
    return EKValue(complex(v), R, tail)


def g_table(z, w, L: Lattice, amax: int, bmax: int, p: SeriesParams = DEFAULT,
            variant: str = "plain"):
    """Array G[a, b] = g*_{a,b}(z, w) for a <= amax, b <= bmax, with (R, tail)."""
    z = _point(L, z, p)
    w = _point(L, w, p)
    mmax = amax + bmax
    nmax = max(amax, bmax) + 1
    Fwz, R1, t1 = f_table(w, z, L, mmax, nmax, p, nmin=1)
    Fzw, R2, t2 = f_table(z, w, L, mmax, nmax, p, nmin=1)
    pz = pairing(L, z.value, w.value)
    G = np.zeros((amax + 1, bmax + 1), dtype=complex)
    weight = 0.0
    for a in range(amax + 1):
        for b in range(bmax + 1):
            s = 0j
            sgn = (-1) ** (a + b + 1)
            for k in range(max(a, b) + 1):
                c1 = math.factorial(k) * math.comb(a, k)
                c2 = math.factorial(k) * math.comb(b, k)
                s += c1 * Fwz[a + b - k, k + 1] * pz + sgn * c2 * Fzw[a + b - k, k + 1]
                weight = max(weight, c1 + c2)
            G[a, b] = s
    if variant == "tilde":
        G = G * tilde_factor(L, z.value, w.value)
    elif variant != "plain":
        raise ValueError("variant must be 'plain' or 'tilde'")
    return G, max(R1, R2), weight * (max(amax, bmax) + 1) * (t1 + t2)


def g_star(a: int, b: int, z, w, L: Lattice, p: SeriesParams = DEFAULT,
           variant: str = "plain") -> EKValue:
    """g*_{a,b}(z, w) as the finite binomial combination of f* series."""
    if a < 0 or b < 0:
        raise ValueError("g* needs a, b >= 0")
    G, R, tail = _g_single(z, w, L, a, b, p, variant)
    return EKValue(complex(G), R, tail)


def _g_single(z, w, L, a, b, p, variant):
    z = _point(L, z, p)
    w = _point(L, w, p)
    mmax = a + b
    nmax = max(a, b) + 1
    Fwz, R1, t1 = f_table(w, z, L, mmax, nmax, p, nmin=1)
    Fzw, R2, t2 = f_table(z, w, L, mmax, nmax, p, nmin=1)
    pz = pairing(L, z.value, w.value)
    s = 0j
    sgn = (-1) ** (a + b + 1)
    weight = 0.0
    for k in range(max(a, b) + 1):
        c1 = math.factorial(k) * math.comb(a, k)
        c2 = math.factorial(k) * math.comb(b, k)
        s += c1 * Fwz[a + b - k, k + 1] * pz + sgn * c2 * Fzw[a + b - k, k + 1]
        weight += c1 + c2
    if variant == "tilde":
        s *= tilde_factor(L, z.value, w.value)
    elif variant != "plain":
        raise ValueError("variant must be 'plain' or 'tilde'")
    return s, max(R1, R2), weight * (t1 + t2)


def ek(a: int, b: int, z, w, L: Lattice, p: SeriesParams = DEFAULT) -> EKValue:
    """e*_{a,b}(z, w) = (-1)^(a+b) A^a/(b-1)! g*_{a,b-1}(z, -w)."""
    if a < 0 or b < 1:
        raise ValueError("e*_{a,b} needs a >= 0, b >= 1")
    z = _point(L, z, p)
    w = _point(L, w, p)
    g = g_star(a, b - 1, z, negate(L, w), L, p)
    c = (-1) ** (a + b) * L.A ** a / math.factorial(b - 1)
    return EKValue(c * g.value, g.radius_used, abs(c) * g.tail_bound)


def ek_direct(a: int, b: int, z, w, L: Lattice, R: float = 150.0,
              cap: float = 2000.0) -> EKValue:
    """Partial Lerch sum of conj(z+lam)^a/(z+lam)^b <lam, w> over |lam+z| <= R."""
    if b < a + 3:
        raise DomainError("direct sum needs b >= a+3; analytic continuation required, use ek")
    if R > cap:
        raise DomainError("R above the feasibility cap")
    zs = classify(L, z)
    zv = zs.value
    wv = complex(w.value if isinstance(w, StratifiedPoint) else w)
    lam = points_near(L, zv, R)
    u = lam + zv
    keep = u != 0 if not zs.on_lattice else np.abs(u) > 1e-12
    u, lam = u[keep], lam[keep]
    order = np.argsort(-np.abs(u))
    u, lam = u[order], lam[order]
    terms = np.conj(u) ** a / u ** b * pairing(L, lam, wv)
    tail = 2 * math.pi / L.area * R ** (a - b + 2) / (b - a - 2)
    return EKValue(complex(np.sum(terms)), R, tail)


def g00_batch(zs, ws, L: Lattice, p: SeriesParams = DEFAULT) -> np.ndarray:
    """g*_{0,0} at many generic pairs (z_k, w_k) in one kernel call per side."""
    zs = np.asarray(zs, dtype=complex).ravel()
    ws = np.asarray(ws, dtype=complex).ravel()
    zp = [classify(L, z, p.snap_eps) for z in zs]
    wp = [classify(L, w, p.snap_eps) for w in ws]
    R = _radius(L, 1, 1, 1, p)
    pts = disk_points(L, R + (abs(L.omega1) + abs(L.omega2)) / 2)
    zr = np.array([q.reduced for q in zp])
    wr = np.array([q.reduced for q in wp])
    zsh = np.array([q.shift for q in zp])
    wsh = np.array([q.shift for q in wp])
    # f*_{0,1}(w, z) <z, w> - f*_{0,1}(z, w)
    Fwz = kernel.f_table_batch(pts, wr, zr, L.A, 0, 1)[:, 0, 1] * pairing(L, wsh, zr)
    Fzw = kernel.f_table_batch(pts, zr, wr, L.A, 0, 1)[:, 0, 1] * pairing(L, zsh, wr)
    zv, wv = zr + zsh, wr + wsh
    return Fwz * pairing(L, zv, wv) - Fzw


def laurent_coefficients(z0, w0, L: Lattice, kmax: int, radius: float = 0.1,
                         nodes: int = 32, p: SeriesParams = DEFAULT) -> np.ndarray:
    """Cauchy-extracted coefficients c[a, b] of w^a z^b in
    exp(((z+z0) conj(w) - w conj(z0))/A) g*_{0,0}(z0+z, -w0-w) on |z| = |w| = radius."""
    z0, w0 = complex(z0), complex(w0)
    t = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    Z, W = np.meshgrid(radius * t, radius * t, indexing="ij")
    g = g00_batch(z0 + Z, -w0 - W, L, p).reshape(Z.shape)
    G = np.exp(((Z + z0) * np.conj(W) - W * np.conj(z0)) / L.A) * g
    # 2D DFT: coefficient of z^b w^a sits at index (b, a)
    c = np.fft.fft2(G) / nodes ** 2
    out = np.zeros((kmax + 1, kmax + 1), dtype=complex)
    for a in range(kmax + 1):
        for b in range(kmax + 1 - a):
            out[a, b] = c[b, a] / radius ** (a + b)
    return out
