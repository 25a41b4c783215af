from fractions import Fraction

import numpy as np
import pytest

from ekkit import symrec as sr
from ekkit.ekseries import g_star
from ekkit.lattice import tau_lattice

from conftest import TAUS

Z, W = 0.31 + 0.17j, 0.12 + 0.44j


def test_mpoly_ops():
    g00, g01 = sr.MPoly.gen("G00"), sr.MPoly.gen("G01")
    assert sr.mpoly_ops(g00, sr.ZERO, "add") == g00
    prod = sr.mpoly_ops(g00, g01, "mul")
    assert list(prod.terms.values()) == [1]
    half = sr.mpoly_ops(g00 + g01, Fraction(1, 2), "scale")
    assert half.text() == "1/2 * G00 + 1/2 * G01"
    assert (g00 - g00) == sr.ZERO and sr.ZERO.text() == "0"
    with pytest.raises(ValueError):
        sr.mpoly_ops(g00, g01, "pow")
    with pytest.raises(ValueError):
        sr.MPoly.gen("X")


def test_reduce_small_cases():
    assert sr.reduce_gab(0, 0) == sr.MPoly.gen("G00")
    assert sr.reduce_gab(0, 1) == sr.MPoly.gen("G01")
    assert sr.reduce_gab(0, 0).text() == "1 * G00"
    assert sr.reduce_gab(1, 0).text() == "-1 * G00 * Zb0 - 1 * G00 * Wb0 + 1 * G01"
    with pytest.raises(ValueError):
        sr.reduce_gab(-1, 0)


def test_reduce_text_deterministic():
    a = sr.reduce_gab(3, 2).text()
    sr.reduce_gab.cache_clear()
    sr._one_var.cache_clear()
    assert sr.reduce_gab(3, 2).text() == a


def test_parity_constants_vanish():
    assert sr.C(0, 2) == sr.ZERO and sr.C(1, 1) == sr.ZERO
    assert sr.C(0, 1) == sr.MPoly.gen("C(0,1)")


def _env(L, a, b):
    poly = sr.reduce_gab(a, b)
    return poly, sr.generator_env(Z, W, L, sr.constants_used([poly]))


def test_eval_examples():
    L = tau_lattice(1j)
    env = sr.generator_env(Z, W, L)
    assert sr.eval_poly(sr.MPoly.gen("G00"), env) == env["G00"]
    for (a, b), tol in (((1, 0), 1e-10), ((2, 3), 1e-9)):
        poly, env = _env(L, a, b)
        ref = g_star(a, b, Z, W, L).value
        assert abs(sr.eval_poly(poly, env) - ref) < tol * max(1, abs(ref))


@pytest.mark.parametrize("tau", TAUS)
def test_all_small_indices(tau):
    L = tau_lattice(tau)
    rng = np.random.default_rng(4)
    polys = {(a, b): sr.reduce_gab(a, b) for a in range(7) for b in range(7 - a)}
    consts = sr.constants_used(polys.values())
    for _ in range(2):
        z = complex(rng.uniform(-0.45, 0.45), rng.uniform(0.15, 0.45))
        w = complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.45, -0.15))
        env = sr.generator_env(z, w, L, consts)
        for (a, b), poly in polys.items():
            ref = g_star(a, b, z, w, L).value
            assert abs(sr.eval_poly(poly, env) - ref) < 1e-9 * max(1, abs(ref))
            one = sr.reduce_gab_z(a, b)
            ref0 = g_star(a, b, z, 0j, L).value
            assert abs(sr.eval_poly(one, env) - ref0) < 1e-9 * max(1, abs(ref0))


def test_constants_set():
    polys = [sr.reduce_gab(a, b) for a in range(7) for b in range(7 - a)]
    used = sr.constants_used(polys)
    assert all((m + n) % 2 == 1 for m, n in used)
    assert used == sorted(used) and len(used) > 0


def test_missing_generator():
    with pytest.raises(sr.MissingGenerator):
        sr.eval_poly(sr.reduce_gab(1, 0), {"G00": 1.0})
