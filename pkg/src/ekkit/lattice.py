"""Lattices in C, the antisymmetric pairing and point stratification.

A lattice is stored through a positively oriented pair of generators.
Points are classified into the on-lattice stratum or the generic one,
and every series in the package is evaluated at reduced representatives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

DEFAULT_SNAP = 1e-9


@dataclass(frozen=True)
class Lattice:
    """The lattice Z*omega1 + Z*omega2 with Im(omega2/omega1) > 0."""

    omega1: complex
    omega2: complex
    area: float = field(init=False, compare=False)
    A: float = field(init=False, compare=False)

    def __post_init__(self):
        area = abs((self.omega1.conjugate() * self.omega2).imag)
        object.__setattr__(self, "area", area)
        object.__setattr__(self, "A", area / math.pi)

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    @property
    def shortest(self) -> float:
        return _shortest_vector(self.omega1, self.omega2)

    def coords(self, z):
        """Real coordinates (x1, x2) with z = x1*omega1 + x2*omega2."""
        w1, w2 = self.omega1, self.omega2
        det = (w1.conjugate() * w2).imag
        z = np.asarray(z, dtype=complex)
        x1 = (z.conjugate() * w2).imag / det
        x2 = (w1.conjugate() * z).imag / det
        if x1.ndim == 0:
            return float(x1), float(x2)
        return x1, x2

    def point(self, m, n):
        return m * self.omega1 + n * self.omega2


@lru_cache(maxsize=256)
def _shortest_vector(w1: complex, w2: complex) -> float:
    best = min(abs(w1), abs(w2))
    for m in range(-6, 7):
        for n in range(-6, 7):
            if m or n:
                best = min(best, abs(m * w1 + n * w2))
    return best


def make_lattice(omega1, omega2) -> Lattice:
    """Build a lattice, swapping the generators if they are negatively oriented."""
    omega1, omega2 = complex(omega1), complex(omega2)
    if omega1 == 0 or omega2 == 0:
        raise ValueError("lattice generators must be nonzero")
    t = omega2 / omega1
    if abs(t.imag) <= 1e-14 * max(1.0, abs(t)):
        raise ValueError("degenerate lattice: generators are collinear")
    if t.imag < 0:
        omega1, omega2 = omega2, omega1
    return Lattice(omega1, omega2)


def tau_lattice(tau) -> Lattice:
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    return Lattice(1.0 + 0j, tau)


def pairing(L: Lattice, z, w):
    """<z, w> = exp((z conj(w) - w conj(z)) / A); unit modulus, trivial on L x L."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    # exponent is purely imaginary: 2i Im(z conj(w)) / A
    out = np.exp(2j * (z * np.conj(w)).imag / L.A)
    return complex(out) if out.ndim == 0 else out


def reduce(L: Lattice, z):
    """Split z = reduced + lam with reduced in the centered fundamental cell."""
    z = complex(z)
    x1, x2 = L.coords(z)
    k1 = math.floor(x1 + 0.5)
    k2 = math.floor(x2 + 0.5)
    lam = k1 * L.omega1 + k2 * L.omega2
    return z - lam, lam


@dataclass(frozen=True)
class StratifiedPoint:
    raw: complex
    on_lattice: bool
    reduced: complex
    shift: complex

    @property
    def stratum(self) -> str:
        return "OnLattice" if self.on_lattice else "Generic"

    @property
    def value(self) -> complex:
        """The point with the snapped representative (raw up to snapping)."""
        return self.reduced + self.shift

    @property
    def delta(self) -> float:
        return 1.0 if self.on_lattice else 0.0


def classify(L: Lattice, z, snap_eps: float = DEFAULT_SNAP,
             force: str | None = None) -> StratifiedPoint:
    """Classify z into a stratum; on-lattice points get reduced == 0 exactly."""
    if isinstance(z, StratifiedPoint):
        return z
    z = complex(z)
    red, lam = reduce(L, z)
    scale = max(abs(L.omega1), abs(L.omega2))
    if force is None:
        on = abs(red) < snap_eps * scale
    else:
        on = force == "OnLattice"
    if on:
        if abs(red) > 1e-6 * scale:
            raise ValueError("cannot force a point far from the lattice onto it")
        return StratifiedPoint(z, True, 0j, lam)
    return StratifiedPoint(z, False, red, lam)


def negate(L: Lattice, p: StratifiedPoint) -> StratifiedPoint:
    """The point -p, keeping the stratum exactly."""
    if p.on_lattice:
        return StratifiedPoint(-p.raw, True, 0j, -p.shift)
    return classify(L, -p.value, force="Generic")


def shifted(L: Lattice, p: StratifiedPoint, q: StratifiedPoint, sign: int = 1):
    """The point p + sign*q; the sum of two lattice points stays on the lattice."""
    if p.on_lattice and q.on_lattice:
        lam = p.shift + sign * q.shift
        return StratifiedPoint(p.raw + sign * q.raw, True, 0j, lam)
    return classify(L, p.value + sign * q.value)


def delta(L: Lattice, z, snap_eps: float = DEFAULT_SNAP) -> float:
    return classify(L, z, snap_eps).delta


def _coord_box(L: Lattice, center: complex, R: float):
    # |x_i| <= R * |dual_i| bounds the coordinates of any point in the disk
    w1, w2 = L.omega1, L.omega2
    det = abs((w1.conjugate() * w2).imag)
    c1, c2 = L.coords(-center)
    b1 = R * abs(w2) / det
    b2 = R * abs(w1) / det
    return (math.floor(c1 - b1), math.ceil(c1 + b1),
            math.floor(c2 - b2), math.ceil(c2 + b2))


def points_near(L: Lattice, center, R: float) -> np.ndarray:
    """All lattice points lam with |lam + center| <= R, each exactly once."""
    if R <= 0:
        raise ValueError("R must be positive")
    center = complex(center)
    m0, m1, n0, n1 = _coord_box(L, center, R)
    m = np.arange(m0, m1 + 1)
    n = np.arange(n0, n1 + 1)
    M, N = np.meshgrid(m, n, indexing="ij")
    lam = (M * L.omega1 + N * L.omega2).ravel()
    return lam[np.abs(lam + center) <= R]


@lru_cache(maxsize=128)
def _disk_points(omega1: complex, omega2: complex, R: float) -> np.ndarray:
    pts = points_near(Lattice(omega1, omega2), 0j, R)
    pts.setflags(write=False)
    return pts


def disk_points(L: Lattice, R: float) -> np.ndarray:
    """Cached read-only array of lattice points with |lam| <= R."""
    return _disk_points(L.omega1, L.omega2, float(R))
