"""Named verification checks, the suite runner and table output.

Each check samples seeded points in the fundamental cell (keeping 0.1 of the
shortest vector away from the lattice), adds exactly constructed on-lattice
cases, and reports the largest relative residual against its threshold.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import ainfinity as ai
from . import classical as cl
from . import symrec as sr
from .ekseries import (DEFAULT, SeriesParams, ek, ek_direct, f_star, g_star, g_table,
                       laurent_coefficients, tilde_factor)
from .lattice import Lattice, StratifiedPoint, classify, pairing, reduce, tau_lattice

CHECK_IDS = (
    "thm-c", "func-eq", "deriv-e", "deriv-g", "limits", "quasi", "zeta-id",
    "kron-id", "e-f-link", "classical-x", "quad", "aybe", "expansion",
    "stasheff", "cyclic", "unital", "perturb-oracle", "maurer-cartan",
    "variation", "corb", "constants",
)

THRESHOLDS = {
    "thm-c": 1e-3, "func-eq": 1e-9, "deriv-e": 1e-5, "deriv-g": 1e-5,
    "limits": 1e-5, "quasi": 1e-9, "zeta-id": 1e-9, "kron-id": 1e-8,
    "e-f-link": 1e-8, "classical-x": 1e-8, "quad": 1e-8, "aybe": 1e-10,
    "expansion": 1e-8, "stasheff": 1e-8, "cyclic": 1e-9, "unital": 1e-12,
    "perturb-oracle": 1e-9, "maurer-cartan": 1e-8, "variation": 1e-5,
    "corb": 1e-9, "constants": 1e-8,
}

SUITE_TAUS = (1j, 0.5 + 1j, -0.25 + 1.1j)
SUITE_SEEDS = (1, 2, 3)
FD_STEP = 1e-3


class UnknownCheck(ValueError):
    pass


@dataclass(frozen=True)
class Env:
    tau: complex = 1j
    r: int = 2
    s: int = 2
    seed: int = 1
    tol: float | None = None  # threshold override
    tol_scale: float = 1.0
    series: SeriesParams = DEFAULT
    sign_bug: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        if self.tau.imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        if self.r < 1 or self.s < 1:
            raise ValueError("r and s must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")

    @property
    def lattice(self) -> Lattice:
        return tau_lattice(self.tau)

    def threshold(self, check: str) -> float:
        base = self.tol if self.tol is not None else THRESHOLDS[check]
        return base * self.tol_scale


@dataclass(frozen=True)
class CheckReport:
    check: str
    tau: complex
    seed: int
    residual: float
    threshold: float
    passed: bool
    elapsed_ms: int
    details: dict

    def to_dict(self, timing: bool = True) -> dict:
        return {"check": self.check, "tau": [self.tau.real, self.tau.imag],
                "seed": self.seed, "residual": self.residual,
                "threshold": self.threshold, "pass": self.passed,
                "elapsed_ms": self.elapsed_ms if timing else 0}

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing))


# ---------------------------------------------------------------- sampling

def lattice_distance(L: Lattice, z) -> float:
    red, _ = reduce(L, z)
    return min(abs(red - m * L.omega1 - n * L.omega2)
               for m in (-1, 0, 1) for n in (-1, 0, 1))


def sample_point(L: Lattice, rng, excl: float = 0.1, strip=None) -> complex:
    """Uniform point of the centered cell at distance >= excl*shortest from L.

    With strip=(lo, hi) the tau-coordinate is drawn from that interval instead.
    """
    while True:
        x1 = rng.uniform(-0.5, 0.5)
        x2 = rng.uniform(-0.5, 0.5) if strip is None else rng.uniform(*strip)
        z = x1 * L.omega1 + x2 * L.omega2
        if lattice_distance(L, z) >= excl * L.shortest:
            return complex(z)


def sample_generic(L: Lattice, rng, k: int, excl: float = 0.1, extra=()):
    """k points that are generic together with all pairwise sums and differences."""
    while True:
        pts = [sample_point(L, rng, excl) for _ in range(k)]
        combos = [p + q for p, q in itertools.combinations(pts, 2)]
        combos += [p - q for p, q in itertools.combinations(pts, 2)]
        combos += [f(pts) for f in extra]
        if all(lattice_distance(L, c) >= excl * L.shortest for c in combos):
            return pts


def sample_config(env: Env, rng) -> ai.AinfConfig:
    L = env.lattice
    w = sample_generic(L, rng, env.r) if env.r > 1 else [sample_point(L, rng)]
    z = sample_generic(L, rng, env.s) if env.s > 1 else [sample_point(L, rng)]
    return ai.AinfConfig(env.tau, tuple(w), tuple(z), env.series, env.sign_bug)


def rel(x, ref) -> float:
    return float(abs(x - ref) / max(1.0, abs(ref)))


def wirtinger(fn, z, bar: bool, h: float = FD_STEP):
    """Richardson-extrapolated central Wirtinger derivative of an array-valued fn."""
    def central(hh):
        sg = 1 if bar else -1
        return (np.asarray(fn(z + hh)) - np.asarray(fn(z - hh))
                + sg * 1j * (np.asarray(fn(z + 1j * hh)) - np.asarray(fn(z - 1j * hh)))) / (4 * hh)

    return (4 * central(h / 2) - central(h)) / 3


def _lattice_vector(L, rng):
    while True:
        m, n = rng.integers(-2, 3, size=2)
        if m or n:
            return complex(L.point(int(m), int(n)))


# ---------------------------------------------------------------- checks

def _check_thm_c(env, rng):
    L = env.lattice
    worst = 0.0
    pts = [(sample_point(L, rng), sample_point(L, rng)) for _ in range(8)]
    pts += [(0j, sample_point(L, rng)), (sample_point(L, rng), 0j)]
    for a, b in ((0, 4), (0, 5), (1, 5), (2, 6)):
        for z, w in pts:
            v = ek(a, b, z, w, L, env.series).value
            d = ek_direct(a, b, z, w, L).value
            worst = max(worst, rel(d, v))
    return worst, {"points": len(pts)}


def _check_func_eq(env, rng):
    L = env.lattice
    A = L.A
    pts = [(sample_point(L, rng), sample_point(L, rng)) for _ in range(8)]
    pts += [(0j, sample_point(L, rng)), (sample_point(L, rng), 0j)]
    worst = 0.0
    for z, w in pts:
        for a in range(5):
            for b in range(1, 6):
                lhs = math.factorial(b - 1) * ek(a, b, z, w, L, env.series).value
                rhs = (A ** (a - b + 1) * math.factorial(a)
                       * ek(b - 1, a + 1, w, z, L, env.series).value * pairing(L, w, z))
                worst = max(worst, rel(lhs, rhs))
    return worst, {"points": len(pts)}


def _ek_table(L, z, w, amax, bmax, p):
    return np.array([[ek(a, b, z, w, L, p).value if b else 0j
                      for b in range(bmax + 1)] for a in range(amax + 1)])


def _check_deriv_e(env, rng):
    L = env.lattice
    A = L.A
    p = env.series
    worst = 0.0
    cases = [(sample_point(L, rng), sample_point(L, rng)) for _ in range(2)]
    # on-lattice partner: z-derivative with w = 0, w-derivative with z = 0
    zcases = cases + [(sample_point(L, rng), 0j)]
    wcases = cases + [(0j, sample_point(L, rng))]
    for z, w in zcases:
        T = _ek_table(L, z, w, 3, 4, p)
        D = wirtinger(lambda x: _ek_table(L, x, w, 3, 4, p), z, False)
        for a in range(4):
            for b in range(1, 4):
                worst = max(worst, rel(D[a, b], -b * T[a, b + 1]))
    for z, w in wcases:
        T = _ek_table(L, z, w, 4, 3, p)
        D = wirtinger(lambda x: _ek_table(L, z, x, 4, 3, p), w, False)
        for a in range(4):
            for b in range(1, 4):
                ref = (-T[a + 1, b] + np.conj(z) * T[a, b]) / A
                worst = max(worst, rel(D[a, b], ref))
    return worst, {"points": len(cases) + 1}


def _f_tab(L, z, w, p, m=4, n=5):
    return np.array([[f_star(i, j, z, w, L, p).value for j in range(n + 1)] for i in range(m + 1)])


def _check_deriv_g(env, rng):
    L = env.lattice
    A = L.A
    p = env.series
    worst = 0.0
    parts = {}

    def gt(z, w):
        return g_table(z, w, L, 4, 4, p)[0]

    base = [(sample_point(L, rng), sample_point(L, rng))]
    zcases = base + [(sample_point(L, rng), 0j)]
    wcases = base + [(0j, sample_point(L, rng))]

    def bump(key, r):
        nonlocal worst
        parts[key] = max(parts.get(key, 0.0), r)
        worst = max(worst, r)

    # (i) the f* series
    z, w = base[0]
    F = _f_tab(L, z, w, p)
    Dz = wirtinger(lambda x: _f_tab(L, x, w, p), z, False)
    Dzb = wirtinger(lambda x: _f_tab(L, x, w, p), z, True)
    Dw = wirtinger(lambda x: _f_tab(L, z, x, p), w, False)
    Dwb = wirtinger(lambda x: _f_tab(L, z, x, p), w, True)
    for m in range(4):
        for n in range(5):
            bump("f_z", rel(Dz[m, n], -F[m + 1, n] - n * F[m, n + 1]))
            bump("f_w", rel(Dw[m, n], F[m + 1, n] - np.conj(z) * F[m, n] / A))
            if n >= 1:
                low = m * F[m - 1, n] if m else 0
                bump("f_zbar", rel(A * Dzb[m, n], low - F[m, n - 1]))
                # the z-term carries no 1/A: d<w, lam>/d conj(w) = -lam/A <w, lam>, lam = u - z
                bump("f_wbar", rel(A * Dwb[m, n], -F[m, n - 1] + z * F[m, n]))
    # (ii), (iv): z-derivatives
    for z, w in zcases:
        G = gt(z, w)
        Dz = wirtinger(lambda x: gt(x, w), z, False)
        Dzb = wirtinger(lambda x: gt(x, w), z, True)
        dw = classify(L, w).delta
        for a in range(4):
            for b in range(4):
                bump("g_z", rel(Dz[a, b], G[a, b + 1]))
                ref = (-a * G[a - 1, b] if a else 0) + (dw if a + b == 0 else 0)
                bump("g_zbar", rel(A * Dzb[a, b], ref))
    # (v): w-derivatives
    for z, w in wcases:
        G = gt(z, w)
        Dw = wirtinger(lambda x: gt(z, x), w, False)
        Dwb = wirtinger(lambda x: gt(z, x), w, True)
        dz = classify(L, z).delta
        for a in range(4):
            for b in range(4):
                bump("g_w", rel(Dw[a, b], -G[a + 1, b] - np.conj(z) * G[a, b] / A))
                ref = (b * G[a, b - 1] if b else 0) + z * G[a, b]
                if a + b == 0:
                    ref -= dz * pairing(L, z, w)
                bump("g_wbar", rel(A * Dwb[a, b], ref))
    return worst, parts


def _richardson_t2(vals, ts):
    """Extrapolate to t = 0 assuming an even expansion in t."""
    V = np.vander(np.asarray(ts) ** 2, len(ts), increasing=True)
    return np.linalg.solve(V, np.asarray(vals))[0]


def _check_limits(env, rng):
    L = env.lattice
    A = L.A
    p = env.series
    ts = (0.1, 0.05, 0.025)
    worst = 0.0
    for _ in range(2):
        w = sample_point(L, rng)
        u = 0.3 + 0.4j
        ref_e = _ek_table(L, 0j, w, 2, 2, p)
        ref_g = g_table(0j, w, L, 2, 2, p)[0]
        for a in range(3):
            for b in range(3):
                ev, gv = [], []
                for t in ts:
                    se = sg = 0j
                    # averaging z_t with -z_t removes the odd orders before extrapolating
                    for zz in (t * u, -t * u):
                        if b:
                            se += ek(a, b, zz, w, L, p).value - np.conj(zz) ** a / zz ** b
                        sg += (g_star(a, b, zz, w, L, p).value
                               + (-1) ** (a + b) * A ** (-a) * math.factorial(b)
                               * np.conj(zz) ** a / zz ** (b + 1))
                    ev.append(se / 2)
                    gv.append(sg / 2)
                if b:
                    worst = max(worst, rel(_richardson_t2(ev, ts), ref_e[a, b]))
                worst = max(worst, rel(_richardson_t2(gv, ts), ref_g[a, b]))
    return worst, {"t": list(ts)}


def _check_quasi(env, rng):
    L = env.lattice
    p = env.series
    worst = 0.0
    cases = [(sample_point(L, rng), sample_point(L, rng)) for _ in range(3)]
    cases += [(0j, sample_point(L, rng)), (sample_point(L, rng), 0j)]
    for z, w in cases:
        lam = _lattice_vector(L, rng)
        zl, wl = z + lam, w + lam
        if z == 0:
            zl = StratifiedPoint(lam, True, 0j, lam)
        if w == 0:
            wl = StratifiedPoint(lam, True, 0j, lam)
        E = _ek_table(L, z, w, 3, 3, p)
        Ez = _ek_table(L, zl, w, 3, 3, p)
        Ew = _ek_table(L, z, wl, 3, 3, p)
        G = g_table(z, w, L, 3, 3, p)[0]
        Gz = g_table(zl, w, L, 3, 3, p)[0]
        Gw = g_table(z, wl, L, 3, 3, p)[0]
        ph = pairing(L, lam, w)
        for a in range(4):
            for b in range(4):
                if b:
                    worst = max(worst, rel(Ew[a, b], E[a, b]), rel(Ez[a, b], E[a, b] / ph))
                worst = max(worst, rel(Gw[a, b], G[a, b]), rel(Gz[a, b], G[a, b] * ph))
    return worst, {"points": len(cases)}


def _check_zeta_id(env, rng):
    L = env.lattice
    p = env.series
    worst = 0.0
    for k in range(10):
        z = sample_point(L, rng)
        Z = cl.Z_fn(z, L)
        g = g_star(0, 0, z, 0j, L, p).value
        gt = g_star(0, 0, z, 0j, L, p, variant="tilde").value
        f = f_star(0, 1, 0j, z, L, p).value - f_star(0, 1, z, 0j, L, p).value
        e = ek(0, 1, z, 0j, L, p).value
        # w on a nonzero lattice point is the same stratum as w = 0
        lam = _lattice_vector(L, rng)
        gl = g_star(0, 0, z, StratifiedPoint(lam, True, 0j, lam), L, p).value
        worst = max(worst, rel(g, -Z), rel(gt, -Z), rel(f, -Z), rel(e, Z), rel(gl, -Z))
    return worst, {"points": 10}


def _check_kron_id(env, rng):
    L = env.lattice
    p = env.series
    worst = 0.0
    for _ in range(10):
        z = sample_point(L, rng, strip=(0.1, 0.4))
        w = -sample_point(L, rng, strip=(0.1, 0.4))
        g = g_star(0, 0, z, w, L, p, variant="tilde").value
        F = cl.kronecker_F(z, -w, env.tau)
        worst = max(worst, rel(g, -2j * math.pi * F))
    return worst, {"points": 10}


def _check_e_f_link(env, rng):
    L = env.lattice
    p = env.series
    worst = 0.0
    for _ in range(10):
        z = sample_point(L, rng, strip=(0.1, 0.4))
        w = sample_point(L, rng, strip=(0.1, 0.4))
        e = ek(0, 1, z, w, L, p).value
        ref = 2j * math.pi * tilde_factor(L, z, w) * cl.kronecker_F(z, w, env.tau)
        worst = max(worst, rel(e, ref))
    return worst, {"points": 10}


def _check_classical_x(env, rng):
    L = env.lattice
    p = env.series
    worst = 0.0
    consts = []
    for _ in range(5):
        z = sample_point(L, rng)
        worst = max(worst, rel(g_star(0, 2, z, 0j, L, p).value, cl.weier_p(z, L, deriv=1)))
        consts.append(g_star(0, 1, z, 0j, L, p).value - cl.weier_p(z, L))
    for c in consts[1:]:
        worst = max(worst, rel(c, consts[0]))
    return worst, {"constant": [consts[0].real, consts[0].imag]}


def _check_quad(env, rng):
    L = env.lattice
    gen = sample_generic(L, rng, 4, extra=[lambda q: q[0] + q[1] + q[2] + q[3]])
    tau = env.tau
    lat = [0j, 1 + tau, 0j, tau]
    worst = 0.0
    for mask in itertools.product((0, 1), repeat=4):
        args = [StratifiedPoint(lat[k], True, 0j, lat[k]) if mask[k] else gen[k] for k in range(4)]
        for a in range(4):
            for b in range(4):
                res, scale = ai.quad_residual(L, a, b, *args, p=env.series)
                worst = max(worst, res / max(1.0, scale))
    return worst, {"strata": 16}


def _check_aybe(env, rng):
    L = env.lattice
    worst = 0.0
    for _ in range(20):
        z, zp, w, wp = sample_generic(L, rng, 4)
        res, scale = ai.aybe_residual(L, z, zp, w, wp, env.series)
        worst = max(worst, res / max(1.0, scale))
    return worst, {"samples": 20}


def _check_expansion(env, rng):
    L = env.lattice
    worst = 0.0
    cases = [(sample_point(L, rng, 0.2), sample_point(L, rng, 0.2)),
             (0j, sample_point(L, rng, 0.2)), (sample_point(L, rng, 0.2), 0j), (0j, 0j)]
    for z0, w0 in cases:
        c = laurent_coefficients(z0, w0, L, 4, p=env.series)
        mw = StratifiedPoint(0j, True, 0j, 0j) if w0 == 0 else -w0
        G = g_table(z0, mw, L, 4, 4, env.series)[0]
        for a in range(5):
            for b in range(5 - a):
                ref = G[a, b] / (math.factorial(a) * math.factorial(b))
                worst = max(worst, rel(c[a, b], ref))
    return worst, {"cases": len(cases)}


def _check_stasheff(env, rng):
    cfg = sample_config(env, rng)
    B = ai.basis(cfg)
    worst = 0.0
    count = 0
    strings = [s for n in range(2, 6) for s in ai.composable_strings(B, n)]
    strings += [ai.random_string(cfg, int(rng.integers(6, 9)), rng) for _ in range(500)]
    for s in strings:
        res, scale = ai.stasheff_terms(cfg, s)
        worst = max(worst, ai.combo_norm(res) / max(1.0, scale))
        count += 1
    return worst, {"strings": count}


def _check_cyclic(env, rng):
    cfg = sample_config(env, rng)
    worst = 0.0
    count = 0
    for length in range(3, 8):
        for s in ai.cyclic_strings(cfg, length):
            res, scale = ai.cyclic_residual(cfg, s)
            worst = max(worst, res / max(1.0, scale))
            count += 1
    return worst, {"strings": count}


def _check_unital(env, rng):
    cfg = sample_config(env, rng)
    B = ai.basis(cfg)
    ids = [x for x in B if x.kind in ("IdP", "IdL")]
    worst = 0.0
    for e in ids:
        for x in B:
            if e.target == x.source:
                worst = max(worst, ai.combo_diff(ai.mu(cfg, (e, x)), {x: 1.0}))
            if x.target == e.source:
                worst = max(worst, ai.combo_diff(ai.mu(cfg, (x, e)), {x: 1.0}))
    for n in (3, 4):
        for s in ai.composable_strings(B, n):
            if any(x.kind in ("IdP", "IdL") for x in s):
                worst = max(worst, ai.combo_norm(ai.mu(cfg, s)))
    return worst, {}


def _type_one(cfg, runs_max):
    P = [ai.XiP(i) for i in range(cfg.r)]
    Lx = [ai.XiL(j) for j in range(cfg.s)]
    for i, j, ip, jp in itertools.product(range(cfg.r), range(cfg.s), range(cfg.r), range(cfg.s)):
        for a, b, c, d in itertools.product(range(runs_max + 1), repeat=4):
            yield ((P[i],) * a + (ai.Theta(i, j),) + (Lx[j],) * b + (ai.Eta(j, ip),)
                   + (P[ip],) * c + (ai.Theta(ip, jp),) + (Lx[jp],) * d)


def _check_perturb(env, rng):
    cfg = sample_config(env, rng)
    worst = 0.0
    count = 0
    for s in _type_one(cfg, 3):
        m = ai.mu(cfg, s)
        o = ai.perturbation_oracle(cfg, s)
        worst = max(worst, ai.combo_diff(m, o) / max(1.0, ai.combo_norm(m)))
        count += 1
    return worst, {"strings": count}


def _check_maurer_cartan(env, rng):
    cfg = sample_config(env, rng)
    B = ai.basis(cfg)
    strings = [s for n in (3, 4) for s in ai.composable_strings(B, n)]
    strings += [ai.random_string(cfg, int(rng.integers(5, 7)), rng) for _ in range(100)]
    worst = 0.0
    for s in strings:
        res, scale = ai.maurer_cartan(cfg, s)
        worst = max(worst, res / max(1.0, scale))
    return worst, {"strings": len(strings)}


def _check_variation(env, rng):
    cfg = sample_config(env, rng)
    worst = 0.0
    printed = 0.0
    count = 0
    # every type-I string of length <= 6, which includes i = i' and j = j'
    for s in ai.type_one_strings(cfg, 6):
        for param in ai.PARAMS:
            n_idx = cfg.s if param in ("z", "zbar") else cfg.r
            for idx in range(n_idx):
                for form in ("raw", "nabla"):
                    lhs, rhs = ai.variation_sides(cfg, param, idx, s, form=form)
                    scale = max(1.0, ai.combo_norm(lhs), ai.combo_norm(rhs))
                    worst = max(worst, ai.combo_diff(lhs, rhs) / scale)
                    count += 1
                if len(s) == 3:
                    lhs, rhs = ai.variation_sides(cfg, param, idx, s, convention="printed")
                    scale = max(1.0, ai.combo_norm(lhs), ai.combo_norm(rhs))
                    printed = max(printed, ai.combo_diff(lhs, rhs) / scale)
    return worst, {"evaluations": count, "printed_convention_residual": printed}


CORB_MAX = 6


def corb_polynomials():
    two = {(a, b): sr.reduce_gab(a, b) for a in range(CORB_MAX + 1)
           for b in range(CORB_MAX + 1 - a)}
    one = {(a, b): sr.reduce_gab_z(a, b) for a in range(CORB_MAX + 1)
           for b in range(CORB_MAX + 1 - a)}
    return two, one


def _check_corb(env, rng):
    L = env.lattice
    p = env.series
    two, one = corb_polynomials()
    consts = sr.constants_used(list(two.values()) + list(one.values()))
    worst = 0.0
    for _ in range(5):
        z, w = sample_generic(L, rng, 2)
        envv = sr.generator_env(z, w, L, consts, p)
        G = g_table(z, w, L, CORB_MAX, CORB_MAX, p)[0]
        G0 = g_table(z, 0j, L, CORB_MAX, CORB_MAX, p)[0]
        for (a, b), poly in two.items():
            worst = max(worst, rel(sr.eval_poly(poly, envv), G[a, b]))
        for (a, b), poly in one.items():
            worst = max(worst, rel(sr.eval_poly(poly, envv), G0[a, b]))
    return worst, {"constants": [f"C({m},{n})" for m, n in consts]}


def _check_constants(env, rng):
    L = env.lattice
    p = env.series
    two, one = corb_polynomials()
    consts = sr.constants_used(list(two.values()) + list(one.values()))
    C = g_table(0j, 0j, L, 8, 8, p)[0]
    worst = rel(C[0, 1], cl.eisenstein2_star(L))
    for k in (2, 3, 4):
        worst = max(worst, rel(C[0, 2 * k - 1], math.factorial(2 * k - 1) * cl.eisenstein(L, 2 * k)))
    for m, n in consts:
        # parity and the flip at z = w = 0
        worst = max(worst, rel(C[m, n], C[n, m]))
    # parity zeros over the range the polynomials consume; beyond it the
    # neighbouring constants grow like A^-m m! and the zeros are only relative
    for m in range(CORB_MAX + 1):
        for n in range(CORB_MAX + 1 - m):
            if (m + n) % 2 == 0:
                worst = max(worst, float(abs(C[m, n])))
    return worst, {"constants": [f"C({m},{n})" for m, n in consts]}


CHECKS = {
    "thm-c": _check_thm_c, "func-eq": _check_func_eq, "deriv-e": _check_deriv_e,
    "deriv-g": _check_deriv_g, "limits": _check_limits, "quasi": _check_quasi,
    "zeta-id": _check_zeta_id, "kron-id": _check_kron_id, "e-f-link": _check_e_f_link,
    "classical-x": _check_classical_x, "quad": _check_quad, "aybe": _check_aybe,
    "expansion": _check_expansion, "stasheff": _check_stasheff, "cyclic": _check_cyclic,
    "unital": _check_unital, "perturb-oracle": _check_perturb,
    "maurer-cartan": _check_maurer_cartan, "variation": _check_variation,
    "corb": _check_corb, "constants": _check_constants,
}


def run_check(check: str, env: Env = Env()) -> CheckReport:
    """Run one named check; deterministic given env."""
    if check not in CHECKS:
        raise UnknownCheck(f"unknown check {check!r}")
    rng = np.random.default_rng([env.seed, CHECK_IDS.index(check)])
    t0 = time.perf_counter()
    residual, details = CHECKS[check](env, rng)
    elapsed = int(round((time.perf_counter() - t0) * 1000))
    residual = float(residual)
    thr = env.threshold(check)
    return CheckReport(check, env.tau, env.seed, residual, thr, bool(residual < thr),
                       elapsed, details)


def max_workers() -> int:
    cap = os.environ.get("EKKIT_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ValueError("EKKIT_THREADS must be an integer") from None
    return n


def _job(args):
    check, env = args
    return run_check(check, env)


def run_suite(env: Env = Env(), checks=CHECK_IDS, taus=SUITE_TAUS, seeds=SUITE_SEEDS,
              workers: int | None = None) -> list[CheckReport]:
    """Every check over every tau and seed; reports in (check, tau, seed) order."""
    jobs = [(c, replace(env, tau=t, seed=s)) for c in checks for t in taus for s in seeds]
    workers = max_workers() if workers is None else workers
    if workers <= 1:
        return [_job(j) for j in jobs]
    # heavy jobs first so the pool drains evenly; results keep job order
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_job, jobs))


def summarize(reports) -> dict:
    return {"total": len(reports), "passed": sum(r.passed for r in reports),
            "failed": [f"{r.check}@{r.tau}/seed{r.seed}" for r in reports if not r.passed]}


# ---------------------------------------------------------------- tables

TABLE_KINDS = ("ek", "gstar", "eisenstein")


def _c(v):
    return [float(np.real(v)), float(np.imag(v))]


def table_rows(kind: str, amax: int, bmax: int, z, w, tau, p: SeriesParams = DEFAULT):
    """Rows ordered by a ascending, then b ascending."""
    L = tau_lattice(tau)
    rows = []
    if kind == "ek":
        zs = classify(L, z, p.snap_eps)
        for a in range(amax + 1):
            for b in range(bmax + 1):
                if b == 0:
                    # continuation to s = 0 from the functional equation
                    v = -1.0 + 0j if (a == 0 and zs.on_lattice) else 0j
                    rows.append({"a": a, "b": b, "value": _c(v), "radius": 0.0, "tail_bound": 0.0})
                    continue
                e = ek(a, b, z, w, L, p)
                rows.append({"a": a, "b": b, "value": _c(e.value), "radius": float(e.radius_used),
                             "tail_bound": float(e.tail_bound)})
    elif kind == "gstar":
        for a in range(amax + 1):
            for b in range(bmax + 1):
                g = g_star(a, b, z, w, L, p)
                rows.append({"a": a, "b": b, "value": _c(g.value), "radius": float(g.radius_used),
                             "tail_bound": float(g.tail_bound)})
    elif kind == "eisenstein":
        for k2 in range(4, 21, 2):
            rows.append({"a": k2, "b": 0, "value": _c(cl.eisenstein(L, k2)),
                         "radius": 0.0, "tail_bound": 0.0})
    else:
        raise ValueError(f"kind must be one of {TABLE_KINDS}")
    return rows


def emit_table(kind, amax, bmax, z, w, tau, fmt="json", out=None, p: SeriesParams = DEFAULT) -> str:
    """Serialize a table; writes to out when given and returns the text."""
    rows = table_rows(kind, amax, bmax, z, w, tau, p)
    if fmt == "json":
        text = json.dumps({"kind": kind, "tau": _c(tau), "z": _c(z), "w": _c(w),
                           "rows": rows}, indent=1) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["a", "b", "re", "im", "radius", "tail_bound"])
        for r in rows:
            wr.writerow([r["a"], r["b"], repr(r["value"][0]), repr(r["value"][1]),
                         repr(r["radius"]), repr(r["tail_bound"])])
        text = buf.getvalue()
    else:
        raise ValueError("format must be json or csv")
    if out is not None:
        with open(out, "w") as fh:
            fh.write(text)
    return text
