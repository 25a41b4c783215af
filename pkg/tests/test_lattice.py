import math

import numpy as np
import pytest

from ekkit.lattice import (Lattice, classify, disk_points, make_lattice, negate,
                           pairing, points_near, reduce, shifted, tau_lattice)


def test_make_lattice_examples():
    L = make_lattice(1, 1j)
    assert L.area == pytest.approx(1.0)
    assert L.A == pytest.approx(1 / math.pi)
    tau = 0.5 + 1.3j
    assert make_lattice(1, tau).area == pytest.approx(1.3)
    M = make_lattice(1j, 1)
    assert M.omega1 == 1 and M.omega2 == 1j
    assert M.area == pytest.approx(1.0)


def test_make_lattice_rejects_degenerate():
    with pytest.raises(ValueError):
        make_lattice(1, 2)
    with pytest.raises(ValueError):
        make_lattice(0, 1j)
    with pytest.raises(ValueError):
        tau_lattice(0.3 - 1j)


def test_pairing_examples():
    L = tau_lattice(1j)
    assert pairing(L, 1, 1j) == pytest.approx(1)
    z, w = 0.3 + 0.1j, -0.2 + 0.45j
    assert pairing(L, z, z) == pytest.approx(1)
    assert pairing(L, z, w) * pairing(L, w, z) == pytest.approx(1)
    assert abs(pairing(L, z, w)) == pytest.approx(1)


def test_pairing_bimultiplicative_and_trivial_on_lattice(lat):
    rng = np.random.default_rng(0)
    z1, z2, w = rng.normal(size=3) + 1j * rng.normal(size=3)
    assert pairing(lat, z1 + z2, w) == pytest.approx(pairing(lat, z1, w) * pairing(lat, z2, w))
    for m, n, p, q in [(1, 0, 0, 1), (2, -3, 5, 1), (-4, 7, 3, -2)]:
        assert pairing(lat, lat.point(m, n), lat.point(p, q)) == pytest.approx(1, abs=1e-12)


def test_reduce_examples():
    L = tau_lattice(1j)
    red, lam = reduce(L, 2.25 + 3j)
    assert red == pytest.approx(0.25) and lam == pytest.approx(2 + 3j)
    assert reduce(L, 0) == (0, 0)
    tau = 0.5 + 1j
    red, lam = reduce(tau_lattice(tau), tau + 0.1)
    assert red == pytest.approx(0.1) and lam == pytest.approx(tau)


def test_classify_examples():
    L = tau_lattice(1j)
    p = classify(L, 1 + 1j + 1e-12)
    assert p.stratum == "OnLattice" and p.reduced == 0 and p.shift == 1 + 1j
    assert classify(L, 0.3 + 0.4j).stratum == "Generic"
    assert classify(L, 0.5).stratum == "Generic"
    with pytest.raises(ValueError):
        classify(L, 0.3, force="OnLattice")


def test_negate_and_shift_keep_stratum(lat):
    a = classify(lat, lat.point(2, -1))
    b = classify(lat, lat.point(-1, 3))
    s = shifted(lat, a, b)
    assert s.on_lattice and s.reduced == 0
    assert s.shift == pytest.approx(lat.point(1, 2))
    assert negate(lat, a).on_lattice
    g = classify(lat, 0.21 + 0.13j)
    assert not shifted(lat, g, a).on_lattice
    assert negate(lat, g).value == pytest.approx(-g.value)


def test_points_near_examples():
    L = tau_lattice(1j)
    got = sorted(points_near(L, 0, 1.0), key=lambda z: (z.real, z.imag))
    assert np.allclose(got, sorted([0, 1, -1, 1j, -1j], key=lambda z: (z.real, z.imag)))
    assert list(points_near(L, 0, 0.5)) == [0]


def test_points_near_matches_double_loop(lat):
    center = 0.37 - 0.21j
    R = 10.0
    brute = [lat.point(m, n) for m in range(-20, 21) for n in range(-20, 21)
             if abs(lat.point(m, n) + center) <= R]
    assert len(points_near(lat, center, R)) == len(brute)


def test_disk_points_cached_readonly():
    L = tau_lattice(0.5 + 1j)
    pts = disk_points(L, 4.0)
    assert pts is disk_points(L, 4.0)
    with pytest.raises(ValueError):
        pts[0] = 1
    assert isinstance(L, Lattice)
