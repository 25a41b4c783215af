"""Regenerate frozen.json with independent high-precision routes (mpmath).

Lattice sums are brute-forced at 30 digits over a coordinate box; the
Weierstrass and Kronecker values come from Jacobi theta functions.  None of
this touches the ekkit code paths.  Run:  python tests/oracles/make_oracles.py
"""
import json
import os
from math import comb, factorial

import mpmath as mp

mp.mp.dps = 30
TAUS = [(0.0, 1.0), (0.5, 1.0), (-0.25, 1.1)]
Z = (0.31, 0.17)
W = (0.12, 0.44)
BOX = 9


def c(x):
    return mp.mpc(*x)


def pair(z, w, A):
    return mp.exp((z * mp.conj(w) - w * mp.conj(z)) / A)


def fstar(m, n, z, w, tau):
    A = mp.im(tau) / mp.pi
    s = mp.mpc(0)
    for i in range(-BOX, BOX + 1):
        for j in range(-BOX, BOX + 1):
            lam = i + j * tau
            u = lam + z
            if abs(u) < mp.mpf("1e-25"):
                continue
            s += mp.conj(u) ** m / u ** n * mp.exp(-abs(u) ** 2 / A) * pair(w, lam, A)
    return s / A ** m


def gstar(a, b, z, w, tau):
    A = mp.im(tau) / mp.pi
    s = mp.mpc(0)
    for k in range(max(a, b) + 1):
        s += factorial(k) * (comb(a, k) * fstar(a + b - k, k + 1, w, z, tau) * pair(z, w, A)
                             + (-1) ** (a + b + 1) * comb(b, k) * fstar(a + b - k, k + 1, z, w, tau))
    return s


def wp(z, tau):
    q = mp.exp(1j * mp.pi * tau)
    th2, th3 = mp.jtheta(2, 0, q), mp.jtheta(3, 0, q)
    f = lambda x: (mp.pi * th2 * th3 * mp.jtheta(4, mp.pi * x, q) / mp.jtheta(1, mp.pi * x, q)) ** 2 \
        - mp.pi ** 2 / 3 * (th2 ** 4 + th3 ** 4)
    return f(z), mp.diff(f, z)


def kron(z, w, tau):
    q = mp.exp(1j * mp.pi * tau)
    t1 = lambda x: mp.jtheta(1, mp.pi * x, q)
    return mp.pi * mp.jtheta(1, 0, q, 1) * t1(z + w) / (2j * mp.pi * t1(z) * t1(w))


def out(v):
    v = mp.mpc(v)
    return [float(mp.re(v)), float(mp.im(v))]


def main():
    data = {"z": Z, "w": W, "cases": []}
    for t in TAUS:
        tau = c(t)
        z, w = c(Z), c(W)
        case = {"tau": t, "f": [], "g": []}
        for m, n in [(0, 1), (2, 1), (1, 3), (3, 2)]:
            case["f"].append({"m": m, "n": n, "value": out(fstar(m, n, z, w, tau)),
                              "value_z0": out(fstar(m, n, mp.mpc(0), w, tau))})
        for a, b in [(0, 0), (1, 2), (2, 3)]:
            case["g"].append({"a": a, "b": b, "value": out(gstar(a, b, z, w, tau))})
        case["g01_origin"] = out(gstar(0, 1, mp.mpc(0), mp.mpc(0), tau))
        p, dp = wp(z, tau)
        case["wp"] = out(p)
        case["wp_prime"] = out(dp)
        zs, ws = mp.mpc(0.3, 0.2 * t[1]), mp.mpc(0.1, 0.35 * t[1])
        case["kron"] = {"z": out(zs), "w": out(ws), "value": out(kron(zs, ws, tau))}
        data["cases"].append(case)
    data["e4_square"] = float(mp.gamma(mp.mpf(1) / 4) ** 8 / (960 * mp.pi ** 2))
    path = os.path.join(os.path.dirname(__file__), "frozen.json")
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)


if __name__ == "__main__":
    main()
