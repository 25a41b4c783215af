"""Acceptance criteria, one printed PASS/FAIL line each.

Tolerances and time budgets are fixed here and never loosened; a criterion
that cannot be met should fail visibly.
"""
import cmath
import math
import shutil
import subprocess
import sys
import time

import numpy as np
import pytest

from ekkit import classical as cl
from ekkit import harness as hs
from ekkit.lattice import make_lattice, tau_lattice

GRID = [(t, s) for t in hs.SUITE_TAUS for s in hs.SUITE_SEEDS]

# criterion -> (checks with their tolerance, wall-clock budget in seconds)
CRITERIA = {
    1: ({"thm-c": 1e-3}, 60),
    2: ({"func-eq": 1e-9}, 10),
    3: ({"zeta-id": 1e-8, "e-f-link": 1e-8, "kron-id": 1e-8}, 10),
    4: ({"deriv-e": 1e-5, "deriv-g": 1e-5}, 30),
    5: ({"limits": 1e-5}, 10),
    6: ({"quad": 1e-8, "aybe": 1e-10}, 60),
    7: ({"stasheff": 1e-8, "maurer-cartan": 1e-8}, 120),
    8: ({"cyclic": 1e-9}, 30),
    9: ({"perturb-oracle": 1e-9}, 30),
    10: ({"expansion": 1e-8}, 20),
    11: ({"variation": 1e-5}, 120),
    12: ({"corb": 1e-9, "constants": 1e-8}, 60),
}


def _report(capsys, k, ok, text):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {k}: {text}")


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    checks, budget = CRITERIA[k]
    t0 = time.perf_counter()
    worst = {c: 0.0 for c in checks}
    for tau, seed in GRID:
        env = hs.Env(tau=tau, seed=seed)
        for c in checks:
            worst[c] = max(worst[c], hs.run_check(c, env).residual)
    elapsed = time.perf_counter() - t0
    ok_res = all(worst[c] < tol for c, tol in checks.items())
    ok = ok_res and elapsed < budget
    parts = ", ".join(f"{c} {worst[c]:.2e} < {tol:.0e}" for c, tol in checks.items())
    _report(capsys, k, ok, f"{parts}; {elapsed:.1f}s (budget {budget}s)")
    assert ok_res, worst
    assert elapsed < budget


def test_criterion_13(capsys):
    t0 = time.perf_counter()
    e6 = abs(cl.eisenstein(tau_lattice(1j), 6))
    e4 = abs(cl.eisenstein(make_lattice(1, cmath.exp(2j * math.pi / 3)), 4))
    ode = legendre = 0.0
    rng = np.random.default_rng(13)
    for tau in hs.SUITE_TAUS:
        L = tau_lattice(tau)
        g2, g3 = cl.weier_invariants(L)
        for _ in range(20):
            z = hs.sample_point(L, rng)
            p, dp = cl.weier_p(z, L), cl.weier_p(z, L, deriv=1)
            ode = max(ode, abs(dp ** 2 - (4 * p ** 3 - g2 * p - g3)) / max(1.0, abs(dp) ** 2))
        # quasi-periods from the local Laurent series of zeta, not from period_eta
        eta1 = 2 * cl.zeta_laurent(L.omega1 / 2, L)
        eta2 = 2 * cl.zeta_laurent(L.omega2 / 2, L)
        legendre = max(legendre, abs(eta1 * L.omega2 - eta2 * L.omega1 - 2j * math.pi))
    elapsed = time.perf_counter() - t0
    ok = e6 < 1e-10 and e4 < 1e-10 and ode < 1e-7 and legendre < 1e-10 and elapsed < 20
    _report(capsys, 13, ok, f"e6(i) {e6:.1e}, e4(hex) {e4:.1e} < 1e-10; wp ODE {ode:.1e} < 1e-7; "
            f"Legendre {legendre:.1e} < 1e-10; {elapsed:.1f}s (budget 20s)")
    assert ok


def test_criterion_14(capsys):
    exe = shutil.which("ekkit")
    cmd = [exe] if exe else [sys.executable, "-m", "ekkit.cli"]
    t0 = time.perf_counter()
    try:
        r = subprocess.run(cmd + ["verify", "--all", "--no-timing"], capture_output=True,
                           text=True, timeout=300)
        code = r.returncode
        tail = r.stderr.strip().splitlines()[-1] if r.stderr.strip() else ""
    except subprocess.TimeoutExpired:
        code, tail = None, "timed out"
    elapsed = time.perf_counter() - t0
    ok = code == 0 and elapsed < 300
    _report(capsys, 14, ok, f"ekkit verify --all exit {code} ({tail}); {elapsed:.1f}s (budget 300s)")
    assert ok
