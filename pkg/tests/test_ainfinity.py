import itertools

import numpy as np
import pytest

from ekkit import ainfinity as ai
from ekkit.ainfinity import Eta, IdL, IdP, Theta, XiL, XiP
from ekkit.ekseries import ek, g_star


@pytest.fixture(scope="module")
def cfg():
    return ai.AinfConfig(1j, w=(0.11 + 0.23j, -0.31 + 0.07j), z=(0.05 - 0.12j, 0.27 + 0.31j))


@pytest.fixture(scope="module")
def cfg_skew():
    return ai.AinfConfig(-0.25 + 1.1j, w=(0.13 + 0.2j, -0.3 + 0.11j), z=(0.02 - 0.17j, 0.29 + 0.36j))


def _rel(a, b):
    return ai.combo_diff(a, b) / max(1.0, ai.combo_norm(b))


def test_basis_counts():
    assert len(ai.basis(ai.AinfConfig(1j, w=(0.1,), z=(0.2j,)))) == 6
    assert len(ai.basis(ai.AinfConfig(1j, w=(0.1, 0.3), z=(0.2j, 0.4j)))) == 16


def test_config_rejects_lattice_differences():
    with pytest.raises(ValueError):
        ai.AinfConfig(1j, w=(0.1, 1.1), z=(0.2j,))


def test_parse_roundtrip(cfg):
    for x in ai.basis(cfg):
        assert ai.parse_element(str(x)) == x
    with pytest.raises(ValueError):
        ai.parse_element("Foo(1)")


def test_m2_table(cfg):
    assert ai.mu(cfg, (Theta(0, 1), Eta(1, 0))) == {XiP(0): 1.0}
    assert ai.mu(cfg, (Eta(1, 0), Theta(0, 1))) == {XiL(1): 1.0}
    assert ai.mu(cfg, (IdP(0), Theta(0, 1))) == {Theta(0, 1): 1.0}
    assert ai.mu(cfg, (Theta(0, 1), IdL(1))) == {Theta(0, 1): 1.0}
    assert ai.mu(cfg, (XiP(0), Theta(0, 1))) == {}
    assert ai.mu(cfg, (Theta(0, 1),)) == {}
    with pytest.raises(ValueError):
        ai.mu(cfg, (Theta(0, 1), Theta(0, 1)))


def test_m3_type_one(cfg):
    got = ai.mu(cfg, (Theta(0, 0), Eta(0, 1), Theta(1, 1)))
    dz = cfg.z[1] - cfg.z[0]
    e_route = -ek(0, 1, dz, cfg.w[0] - cfg.w[1], cfg.lattice).value
    g_route = g_star(0, 0, dz, cfg.w[1] - cfg.w[0], cfg.lattice).value
    assert set(got) == {Theta(0, 1)}
    assert got[Theta(0, 1)] == pytest.approx(e_route, rel=1e-12)
    assert got[Theta(0, 1)] == pytest.approx(g_route, rel=1e-12)


def test_type_three_coefficient(cfg):
    # Theta xi^b Eta xi^c Theta xi^d Eta with a = e = 0
    s = (Theta(0, 1), XiL(1), Eta(1, 1), Theta(1, 0), Eta(0, 0))
    got = ai.mu(cfg, s)
    assert set(got) == {IdP(0)}
    assert got[IdP(0)] == pytest.approx(cfg.Mt(1, 1, 0, 0, 0, 1, 1, 0), rel=1e-12)


def test_higher_products_with_identity_vanish(cfg):
    assert ai.mu(cfg, (IdP(0), Theta(0, 0), Eta(0, 1), Theta(1, 1))) == {}
    assert ai.mu(cfg, (Theta(0, 0), IdL(0), Eta(0, 1), Theta(1, 1))) == {}


def test_unital(cfg):
    for x in ai.basis(cfg):
        left = IdP(x.source[1]) if x.source[0] == "P" else IdL(x.source[1])
        right = IdP(x.target[1]) if x.target[0] == "P" else IdL(x.target[1])
        assert ai.mu(cfg, (left, x)) == {x: 1.0}
        assert ai.mu(cfg, (x, right)) == {x: 1.0}


def test_pairing_examples():
    assert ai.pairing_E(IdP(1), XiP(1)) == 1
    assert ai.pairing_E(Theta(1, 2), Eta(2, 1)) == 1
    assert ai.pairing_E(Eta(2, 1), Theta(1, 2)) == 1
    assert ai.pairing_E(Theta(1, 2), Eta(2, 2)) == 0
    with pytest.raises(ValueError):
        ai.pairing_E(IdP(0), IdP(0))


def test_length_three_stasheff_exact(cfg):
    letters = [x for x in ai.basis(cfg) if x.kind in ("Theta", "Eta")]
    for s in ai.composable_strings(letters, 3):
        assert ai.stasheff_residual(cfg, s) == 0.0


def test_stasheff_exhaustive_short(cfg_skew):
    B = ai.basis(cfg_skew)
    for n in (4, 5):
        for s in ai.composable_strings(B, n):
            res, scale = ai.stasheff_terms(cfg_skew, s)
            assert ai.combo_norm(res) < 1e-8 * max(1.0, scale)


def test_stasheff_long_type_one_chain(cfg):
    s = (XiP(0), Theta(0, 1), XiL(1), Eta(1, 0), XiP(0), Theta(0, 0), XiL(0), Eta(0, 1), Theta(1, 1))
    res, scale = ai.stasheff_terms(cfg, s)
    assert ai.combo_norm(res) < 1e-8 * max(1.0, scale)


def test_sign_bug_is_detected(cfg):
    bad = ai.AinfConfig(cfg.tau, cfg.w, cfg.z, sign_bug=True)
    # length 5 mixes m4 o m2 terms with m3 o m3 terms, so a flipped m4 sign shows
    s = (Theta(0, 0), Eta(0, 1), Theta(1, 1), Eta(1, 0), Theta(0, 1))
    assert ai.stasheff_residual(cfg, s) < 1e-10
    assert ai.stasheff_residual(bad, s) > 1e-2


def test_stasheff_rejects_bad_strings(cfg):
    with pytest.raises(ValueError):
        ai.stasheff_residual(cfg, (Theta(0, 0), Theta(0, 0)))
    with pytest.raises(ValueError):
        ai.stasheff_residual(cfg, (Theta(0, 0),) , max_n=4)


@pytest.mark.parametrize("runs", [(0, 0, 0, 0), (2, 1, 0, 1), (1, 0, 2, 0)])
@pytest.mark.parametrize("idx", [(0, 0, 1, 1), (0, 1, 0, 1), (1, 0, 1, 0)])
def test_perturbation_oracle(cfg, runs, idx):
    a, b, c, d = runs
    i, j, ip, jp = idx
    s = ((XiP(i),) * a + (Theta(i, j),) + (XiL(j),) * b + (Eta(j, ip),)
         + (XiP(ip),) * c + (Theta(ip, jp),) + (XiL(jp),) * d)
    assert _rel(ai.perturbation_oracle(cfg, s), ai.mu(cfg, s)) < 1e-9


def test_perturbation_oracle_shape_error(cfg):
    with pytest.raises(ValueError):
        ai.perturbation_oracle(cfg, (Eta(0, 0), Theta(0, 0), Eta(0, 0)))


def test_cyclic_short(cfg):
    for n in (3, 4, 5):
        for s in ai.cyclic_strings(cfg, n):
            res, scale = ai.cyclic_residual(cfg, s)
            assert res < 1e-9 * max(1.0, scale)


def _random_cochain(rng, arity, deg, B):
    table = {}
    for s in ai.composable_strings(B, arity):
        if rng.random() < 0.3:
            outs = [x for x in B if x.source == s[0].source and x.target == s[-1].target
                    and x.degree == sum(y.degree for y in s) + deg]
            if outs:
                table[s] = {outs[rng.integers(len(outs))]: complex(rng.normal(), rng.normal())}
    return ai.Cochain(arity, deg, lambda a, t=table: dict(t.get(a, {})))


def test_bracket_antisymmetry_and_jacobi():
    cfg = ai.AinfConfig(1j, w=(0.1,), z=(0.2j,))
    B = ai.basis(cfg)
    rng = np.random.default_rng(5)
    f = _random_cochain(rng, 2, 0, B)
    g = _random_cochain(rng, 1, 0, B)
    h = _random_cochain(rng, 2, -1, B)
    fg, gf = ai.gerstenhaber(f, g), ai.gerstenhaber(g, f)
    sgn = (-1) ** (f.shifted * g.shifted)
    for s in ai.composable_strings(B, 2):
        a, b = fg(s), gf(s)
        for k in set(a) | set(b):
            assert abs(a.get(k, 0) + sgn * b.get(k, 0)) == 0
    # [f,[g,h]] = [[f,g],h] + (-1)^{|f||g|} [g,[f,h]]
    lhs = ai.gerstenhaber(f, ai.gerstenhaber(g, h))
    r1 = ai.gerstenhaber(ai.gerstenhaber(f, g), h)
    r2 = ai.gerstenhaber(g, ai.gerstenhaber(f, h))
    for s in ai.composable_strings(B, 3):
        rhs = ai.cochain_sum(r1, r2, weights=[1.0, sgn])(s)
        assert ai.combo_diff(lhs(s), rhs) < 1e-12


def test_maurer_cartan(cfg):
    rng = np.random.default_rng(11)
    for n in (3, 4, 5, 6):
        s = ai.random_string(cfg, n, rng)
        res, scale = ai.maurer_cartan(cfg, s)
        assert res < 1e-8 * max(1.0, scale)


def test_builtin_cochains_printed(cfg):
    f0 = ai.builtin_cochains(cfg, "f0_z", 1)
    assert f0.arity == 0 and f0(()) == {XiL(1): 1.0}
    assert ai.builtin_cochains(cfg, "f0_w", 0)(()) == {XiP(0): -1.0}
    f1 = ai.builtin_cochains(cfg, "f1", 0)
    got = f1((Theta(0, 1),))[Theta(0, 1)]
    assert got == pytest.approx(-np.conj(cfg.z[1]))
    f2 = ai.builtin_cochains(cfg, "f2_w", 0)
    assert f2((Theta(0, 1), XiL(1))) == {Theta(0, 1): 1.0}
    assert ai.builtin_cochains(cfg, "f2_z", 1)((Eta(1, 0), XiP(0))) == {Eta(1, 0): 1.0}
    with pytest.raises(ValueError):
        ai.builtin_cochains(cfg, "f9", 0)


def test_builtin_corrected_flips(cfg):
    assert ai.builtin_cochains(cfg, "f0_w", 0, "corrected")(()) == {XiP(0): 1.0}
    f2 = ai.builtin_cochains(cfg, "f2_w", 0, "corrected")
    assert f2((XiL(1), Eta(1, 0))) == {Eta(1, 0): 1.0}
    assert ai.builtin_cochains(cfg, "f2_w", 0, "printed")((XiL(1), Eta(1, 0))) == {Eta(1, 0): -1.0}


LEN5 = (XiP(0), Theta(0, 1), Eta(1, 1), Theta(1, 0), XiL(0))


def test_variation_z_length_five_h_small(cfg):
    lhs, rhs = ai.variation_sides(cfg, "z", 1, LEN5, h=1e-4)
    assert ai.combo_diff(lhs, rhs) < 1e-5 * max(1.0, ai.combo_norm(rhs))


@pytest.mark.parametrize("param", ai.PARAMS)
@pytest.mark.parametrize("form", ["raw", "nabla"])
def test_variation_all_params(cfg, param, form):
    for idx in (0, 1):
        lhs, rhs = ai.variation_sides(cfg, param, idx, LEN5, form=form)
        assert ai.combo_diff(lhs, rhs) < 1e-5 * max(1.0, ai.combo_norm(rhs))


def test_variation_coincident_indices_need_delta(cfg):
    s = (Theta(0, 1), Eta(1, 0), Theta(0, 0))
    assert ai.variation_residual(cfg, "zbar", 1, s) < 1e-5
    assert ai.variation_residual(cfg, "zbar", 1, s, delta_terms=False) > 0.5


def test_variation_printed_convention_fails(cfg):
    s = (Theta(0, 1), Eta(1, 1), Theta(1, 0))
    worst = max(ai.variation_residual(cfg, "w", i, s, convention="printed") for i in (0, 1))
    assert worst > 1e-2


def test_variation_bad_param(cfg):
    with pytest.raises(ValueError):
        ai.variation_residual(cfg, "q", 0, LEN5)


def test_quad_all_strata():
    from ekkit.lattice import tau_lattice
    L = tau_lattice(0.5 + 1j)
    pts = {"z": 0.21 + 0.13j, "zp": -0.17 + 0.32j, "w": 0.08 - 0.27j, "wp": 0.36 + 0.05j}
    for mask in itertools.product((False, True), repeat=4):
        args = [L.point(1, -1) if on else v for on, v in zip(mask, pts.values())]
        for a, b in ((0, 0), (1, 2), (2, 1)):
            res, scale = ai.quad_residual(L, a, b, *args)
            assert res < 1e-8 * max(1.0, scale)


def test_aybe():
    from ekkit.lattice import tau_lattice
    L = tau_lattice(1j)
    res, scale = ai.aybe_residual(L, 0.21 + 0.13j, -0.17 + 0.32j, 0.08 - 0.27j, 0.36 + 0.05j)
    assert res < 1e-10 * max(1.0, scale)
