"""The minimal cyclic A-infinity algebra Ext*(G, G) for an elliptic curve.

Objects are P_i (i < r) and L_j (j < s).  Basis elements are written in the
rescaled basis; strings compose left to right, so the target of x_k must be
the source of x_{k+1}.  Higher products are nonzero only on the four string
shapes (types I-IV); their coefficients are

    Mt(a,b,c,d) = (-1)^(C(n,2)+1) / (a! b! c! d!) * g*_{a+c,b+d}(z_j' - z_j, w_i' - w_i)

with n = a+b+c+d+3.
"""
from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .ekseries import DEFAULT, SeriesParams, f_table, g_star, g_table, tilde_factor
from .lattice import (Lattice, StratifiedPoint, classify, negate, pairing,
                      shifted, tau_lattice)

PRUNE = 1e-15


class BasisElement(NamedTuple):
    """kind in {IdP, IdL, XiP, XiL, Theta, Eta}; Theta(i,j): P_i -> L_j, Eta(j,i): L_j -> P_i."""

    kind: str
    i: int | None
    j: int | None

    @property
    def degree(self) -> int:
        return 1 if self.kind in ("XiP", "XiL", "Eta") else 0

    @property
    def source(self):
        if self.kind in ("IdP", "XiP", "Theta"):
            return ("P", self.i)
        return ("L", self.j)

    @property
    def target(self):
        if self.kind in ("IdP", "XiP", "Eta"):
            return ("P", self.i)
        return ("L", self.j)

    def __str__(self):
        if self.kind in ("IdP", "XiP"):
            return f"{self.kind}({self.i})"
        if self.kind in ("IdL", "XiL"):
            return f"{self.kind}({self.j})"
        if self.kind == "Theta":
            return f"Theta({self.i},{self.j})"
        return f"Eta({self.j},{self.i})"


def IdP(i):
    return BasisElement("IdP", i, None)


def IdL(j):
    return BasisElement("IdL", None, j)


def XiP(i):
    return BasisElement("XiP", i, None)


def XiL(j):
    return BasisElement("XiL", None, j)


def Theta(i, j):
    return BasisElement("Theta", i, j)


def Eta(j, i):
    return BasisElement("Eta", i, j)


def parse_element(text: str) -> BasisElement:
    """Inverse of str(BasisElement)."""
    name, _, rest = text.strip().partition("(")
    args = [int(t) for t in rest.rstrip(")").split(",") if t.strip()]
    makers = {"IdP": IdP, "IdL": IdL, "XiP": XiP, "XiL": XiL, "Theta": Theta, "Eta": Eta}
    if name not in makers:
        raise ValueError(f"unknown basis element {text!r}")
    return makers[name](*args)


def composable(string) -> bool:
    return all(x.target == y.source for x, y in zip(string, string[1:]))


# sparse linear combinations are plain dicts BasisElement -> complex

def combo_add(d, k, v):
    d[k] = d.get(k, 0) + v


def combo_norm(d) -> float:
    return max([abs(v) for v in d.values()] + [0.0])


def combo_diff(a, b) -> float:
    return max([abs(a.get(k, 0) - b.get(k, 0)) for k in set(a) | set(b)] + [0.0])


def prune(d):
    return {k: v for k, v in d.items() if abs(v) > PRUNE}


@dataclass(frozen=True, eq=False)
class AinfConfig:
    tau: complex
    w: tuple
    z: tuple
    series: SeriesParams = DEFAULT
    sign_bug: bool = False  # mutation switch used to show the checks can fail
    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        object.__setattr__(self, "w", tuple(complex(x) for x in self.w))
        object.__setattr__(self, "z", tuple(complex(x) for x in self.z))
        if not self.w or not self.z:
            raise ValueError("need r >= 1 and s >= 1")
        L = self.lattice
        for name, vals in (("w", self.w), ("z", self.z)):
            for a, b in itertools.combinations(range(len(vals)), 2):
                if classify(L, vals[b] - vals[a], self.series.snap_eps).on_lattice:
                    raise ValueError(f"{name}_{a} - {name}_{b} lies on the lattice")

    @property
    def lattice(self) -> Lattice:
        return tau_lattice(self.tau)

    @property
    def r(self):
        return len(self.w)

    @property
    def s(self):
        return len(self.z)

    @property
    def A(self):
        return self.lattice.A

    def diff_z(self, j, jp) -> StratifiedPoint:
        L = self.lattice
        if j == jp:
            return StratifiedPoint(0j, True, 0j, 0j)
        return classify(L, self.z[jp] - self.z[j], force="Generic")

    def diff_w(self, i, ip) -> StratifiedPoint:
        L = self.lattice
        if i == ip:
            return StratifiedPoint(0j, True, 0j, 0j)
        return classify(L, self.w[ip] - self.w[i], force="Generic")

    def g(self, a, b, j, jp, i, ip) -> complex:
        """g*_{a,b}(z_j' - z_j, w_i' - w_i), memoized per index quadruple."""
        key = (j, jp, i, ip)
        tab = self._cache.get(key)
        if tab is None or tab.shape[0] <= a or tab.shape[1] <= b:
            K = max(6, a, b)
            tab, _, _ = g_table(self.diff_z(j, jp), self.diff_w(i, ip),
                                self.lattice, K, K, self.series)
            with self._lock:
                self._cache[key] = tab
        return complex(tab[a, b])

    def Mt(self, a, b, c, d, i, ip, j, jp) -> complex:
        n = a + b + c + d + 3
        sgn = (-1) ** (math.comb(n, 2) + 1)
        if self.sign_bug and n == 4:
            sgn = -sgn
        den = math.factorial(a) * math.factorial(b) * math.factorial(c) * math.factorial(d)
        return sgn / den * self.g(a + c, b + d, j, jp, i, ip)

    def perturbed(self, which: str, idx: int, delta: complex) -> "AinfConfig":
        """Config with w_idx or z_idx moved by delta; memoized so finite
        differences over many strings share one set of series values."""
        key = ("perturbed", which, idx, complex(delta))
        cfg = self._cache.get(key)
        if cfg is None:
            cfg = self._perturb(which, idx, delta)
            with self._lock:
                self._cache[key] = cfg
        return cfg

    def _perturb(self, which, idx, delta):
        w, z = list(self.w), list(self.z)
        if which == "w":
            w[idx] += delta
        elif which == "z":
            z[idx] += delta
        else:
            raise ValueError("which must be 'w' or 'z'")
        return AinfConfig(self.tau, tuple(w), tuple(z), self.series, self.sign_bug)


def basis(config: AinfConfig):
    out = []
    for i in range(config.r):
        out += [IdP(i), XiP(i)]
    for j in range(config.s):
        out += [IdL(j), XiL(j)]
    for i in range(config.r):
        for j in range(config.s):
            out += [Theta(i, j), Eta(j, i)]
    return out


def _runs(string, pos):
    n = len(string)
    return [pos[0]] + [pos[k + 1] - pos[k] - 1 for k in range(len(pos) - 1)] + [n - 1 - pos[-1]]


def string_type(string):
    """Classify a string with no identities as I-IV, or None; returns (type, runs, letters)."""
    pos = [k for k, x in enumerate(string) if x.kind in ("Theta", "Eta")]
    if not pos:
        return None, None, None
    letters = [string[k] for k in pos]
    kinds = tuple(x.kind for x in letters)
    t = {("Theta", "Eta", "Theta"): "I", ("Eta", "Theta", "Eta"): "II",
         ("Theta", "Eta", "Theta", "Eta"): "III",
         ("Eta", "Theta", "Eta", "Theta"): "IV"}.get(kinds)
    return t, (_runs(string, pos) if t else None), letters


def mu(config: AinfConfig, string) -> dict:
    """m_n on a composable string of basis elements, as a sparse combination."""
    string = tuple(string)
    n = len(string)
    if n == 0:
        raise ValueError("m_0 is not part of the structure")
    if not composable(string):
        raise ValueError("string is not composable")
    if n == 1:
        return {}
    if n == 2:
        x, y = string
        if x.kind in ("IdP", "IdL"):
            return {y: 1.0}
        if y.kind in ("IdP", "IdL"):
            return {x: 1.0}
        if x.kind == "Theta" and y.kind == "Eta" and x.i == y.i:
            return {XiP(x.i): 1.0}
        if x.kind == "Eta" and y.kind == "Theta" and x.j == y.j:
            return {XiL(x.j): 1.0}
        return {}
    if any(x.kind in ("IdP", "IdL") for x in string):
        return {}
    t, runs, L = string_type(string)
    if t == "I":
        a, b, c, d = runs
        t1, _, t2 = L
        return {Theta(t1.i, t2.j): config.Mt(a, b, c, d, t1.i, t2.i, t1.j, t2.j)}
    if t == "II":
        # Eta(j,i) xi^b Theta(i,j') xi^c Eta(j',i') xi^d after xi^a
        a, b, c, d = runs
        e1, t1, e2 = L
        return {Eta(e1.j, e2.i): config.Mt(b, c, d, a, e1.i, e2.i, t1.j, e1.j)}
    if t == "III":
        a, b, c, d, e = runs
        t1, _, t2, e2 = L
        if e2.i != t1.i:
            return {}
        return {IdP(t1.i): config.Mt(a + e + 1, b, c, d, t1.i, t2.i, t1.j, t2.j)}
    if t == "IV":
        a, b, c, d, e = runs
        e1, t1, e2, t2 = L
        if t2.j != e1.j:
            return {}
        return {IdL(e1.j): config.Mt(b, c, d, a + e + 1, e1.i, e2.i, t1.j, e1.j)}
    return {}


def composable_strings(elements, n):
    """All composable strings of length n over the given elements."""
    out = []
    by_source = {}
    for x in elements:
        by_source.setdefault(x.source, []).append(x)

    def rec(cur):
        if len(cur) == n:
            out.append(tuple(cur))
            return
        nxt = elements if not cur else by_source.get(cur[-1].target, [])
        for x in nxt:
            cur.append(x)
            rec(cur)
            cur.pop()

    rec([])
    return out


def random_string(config, n, rng, elements=None):
    """Seeded random composable string of length n."""
    elements = elements or basis(config)
    by_source = {}
    for x in elements:
        by_source.setdefault(x.source, []).append(x)
    cur = [elements[rng.integers(len(elements))]]
    while len(cur) < n:
        opts = by_source[cur[-1].target]
        cur.append(opts[rng.integers(len(opts))])
    return tuple(cur)


def stasheff_terms(config, string):
    """Signed sum  sum (-1)^(r+st+s*deg(x_1..x_r)) m_{r+1+t}(x.., m_s(..), ..)."""
    N = len(string)
    res = {}
    scale = 0.0
    prefix_deg = [0]
    for x in string:
        prefix_deg.append(prefix_deg[-1] + x.degree)
    for r in range(N):
        for s in range(2, N - r + 1):
            t = N - r - s
            if r + 1 + t < 2:
                continue
            sign = (-1) ** (r + s * t + s * prefix_deg[r])
            inner = mu(config, string[r:r + s])
            for y, c in inner.items():
                outer = mu(config, string[:r] + (y,) + string[r + s:])
                for zz, c2 in outer.items():
                    combo_add(res, zz, sign * c * c2)
                    scale = max(scale, abs(c * c2))
    return res, scale


def stasheff_residual(config, string, max_n=None) -> float:
    """Max-norm of the A-infinity relation evaluated on one composable string."""
    string = tuple(string)
    if max_n is not None and not 2 <= len(string) <= max_n:
        raise ValueError("string length outside [2, max_n]")
    if not composable(string):
        raise ValueError("string is not composable")
    res, _ = stasheff_terms(config, string)
    return combo_norm(res)


def pairing_E(x: BasisElement, y: BasisElement) -> complex:
    """Unit symmetric pairing between degree-0 and degree-1 elements."""
    if x.degree + y.degree != 1:
        raise ValueError("pairing needs total degree 1")
    a, b = (x, y) if x.degree == 0 else (y, x)
    if a.kind == "IdP" and b.kind == "XiP" and a.i == b.i:
        return 1.0
    if a.kind == "IdL" and b.kind == "XiL" and a.j == b.j:
        return 1.0
    if a.kind == "Theta" and b.kind == "Eta" and a.i == b.i and a.j == b.j:
        return 1.0
    return 0.0


def pair_combo(c: dict, y: BasisElement) -> complex:
    s = 0j
    for x, v in c.items():
        if x.degree + y.degree == 1:
            s += v * pairing_E(x, y)
    return s


def cyclic_residual(config, string) -> tuple[float, float]:
    """<m_n(a_1..a_n), a_{n+1}> - (-1)^(n(deg a_1 + 1)) <m_n(a_2..a_{n+1}), a_1>."""
    n = len(string) - 1
    lhs = pair_combo(mu(config, string[:-1]), string[-1])
    rhs = (-1) ** (n * (string[0].degree + 1)) * pair_combo(mu(config, string[1:]), string[0])
    return abs(lhs - rhs), max(abs(lhs), abs(rhs))


def cyclic_strings(config, length):
    """Cyclically composable strings of the given length with total degree length-2."""
    out = []
    for s in composable_strings(basis(config), length):
        if s[-1].target == s[0].source and sum(x.degree for x in s) == length - 2:
            out.append(s)
    return out


# ---------------------------------------------------------------- perturbation

def perturbation_oracle(config: AinfConfig, string) -> dict:
    """Type-I product through the binomial sums of the perturbation expansion."""
    t, runs, letters = string_type(tuple(string))
    if t != "I" or any(x.kind in ("IdP", "IdL") for x in string) or not composable(string):
        raise ValueError("perturbation_oracle needs a type-I string")
    a, b, c, d = runs
    t1, _, t2 = letters
    i, j, ip, jp = t1.i, t1.j, t2.i, t2.j
    n = len(string)
    L = config.lattice
    A = L.A
    zz = config.diff_z(j, jp)
    ww = config.diff_w(i, ip)
    top = n
    Fwz, _, _ = f_table(ww, zz, L, top, top, config.series, nmin=1)
    Fzw, _, _ = f_table(zz, ww, L, top, top, config.series, nmin=1)
    tw = tilde_factor(L, ww.value, zz.value)
    tz = tilde_factor(L, zz.value, ww.value)

    def phi(F, tf, k, l, p):
        return A ** (k + p + l + 1) / (math.factorial(k) * math.factorial(p)) * tf * F[k + p, l + 1]

    s1 = (-1) ** (math.comb(n, 2) + 1)
    s2 = (-1) ** (math.comb(n, 2) + n + 1)
    total = 0j
    for a1 in range(a + 1):
        a2 = a - a1
        for c1 in range(c + 1):
            c2 = c - c1
            coef = math.comb(a2 + b, a2) * math.comb(a1 + c1, a1) * math.comb(c2 + d, c2)
            total += s1 * coef * phi(Fwz, tw, a2 + b, a1 + c1, c2 + d)
    for b1 in range(b + 1):
        b2 = b - b1
        for d1 in range(d + 1):
            d2 = d - d1
            coef = math.comb(c + d1, c) * math.comb(b2 + d2, b2) * math.comb(a + b1, a)
            total += s2 * coef * phi(Fzw, tz, c + d1, b2 + d2, a + b1)
    # pass to the rescaled basis
    total *= A ** (-(n - 2)) / tz
    return {Theta(i, jp): total}


def type_one_strings(config, max_len, min_len=3):
    out = []
    P = [XiP(i) for i in range(config.r)]
    Lx = [XiL(j) for j in range(config.s)]
    for i, j, ip, jp in itertools.product(range(config.r), range(config.s),
                                          range(config.r), range(config.s)):
        for n in range(min_len, max_len + 1):
            for a, b, c, d in itertools.product(range(n - 2), repeat=4):
                if a + b + c + d != n - 3:
                    continue
                s = ((P[i],) * a + (Theta(i, j),) + (Lx[j],) * b + (Eta(j, ip),)
                     + (P[ip],) * c + (Theta(ip, jp),) + (Lx[jp],) * d)
                out.append(s)
    return out


# ---------------------------------------------------------------- cochains

class Cochain:
    """Hochschild cochain of the given arity and intrinsic degree.

    fn receives a composable tuple of basis elements and returns a dict;
    on non-composable strings the value is zero.
    """

    def __init__(self, arity: int, deg: int, fn: Callable, name: str = ""):
        self.arity = arity
        self.deg = deg
        self.fn = fn
        self.name = name

    @property
    def shifted(self) -> int:
        return self.deg + self.arity - 1

    def __call__(self, args) -> dict:
        args = tuple(args)
        if len(args) != self.arity or not composable(args):
            return {}
        return self.fn(args)

    def __repr__(self):
        return f"Cochain({self.name or '?'}, arity={self.arity}, deg={self.deg})"


def m_cochain(config, n) -> Cochain:
    return Cochain(n, 2 - n, lambda a: mu(config, a), name=f"m{n}")


def circle(f: Cochain, g: Cochain, args) -> dict:
    """f o-bar g with sign (-1)^((|a_1|+..+|a_(i-1)| + m - 1) deg g + (i-1)(n-1)), |a| = deg a."""
    m, n = f.arity, g.arity
    args = tuple(args)
    out = {}
    if len(args) != m + n - 1:
        return out
    for i in range(1, m + 1):
        pre, mid, post = args[:i - 1], args[i - 1:i - 1 + n], args[i - 1 + n:]
        if n and not composable(mid):
            continue
        sign = (-1) ** ((sum(x.degree for x in pre) + m - 1) * g.deg + (i - 1) * (n - 1))
        inner = g(mid)
        for y, c in inner.items():
            for zz, c2 in f(pre + (y,) + post).items():
                combo_add(out, zz, sign * c * c2)
    return out


def gerstenhaber(f: Cochain, g: Cochain) -> Cochain:
    """[f, g] = f o g - (-1)^(|f||g|) g o f, graded by |f| = deg + arity - 1."""
    sgn = (-1) ** (f.shifted * g.shifted)

    def fn(args):
        out = circle(f, g, args)
        for k, v in circle(g, f, args).items():
            combo_add(out, k, -sgn * v)
        return out

    return Cochain(f.arity + g.arity - 1, f.deg + g.deg, fn, name=f"[{f.name},{g.name}]")


def cochain_sum(*cs, weights=None) -> Callable:
    weights = weights or [1.0] * len(cs)

    def ev(args):
        out = {}
        for c, wgt in zip(cs, weights):
            for k, v in c(args).items():
                combo_add(out, k, wgt * v)
        return out

    return ev


def maurer_cartan(config, string) -> tuple[float, float]:
    """[m, m] on one string, m = sum of all m_k; returns (residual, scale)."""
    N = len(string)
    out = {}
    scale = 0.0
    for p in range(2, N + 1):
        q = N + 1 - p
        if q < 2:
            continue
        val = gerstenhaber(m_cochain(config, p), m_cochain(config, q))(string)
        for k, v in val.items():
            combo_add(out, k, v)
        scale = max(scale, combo_norm(val))
    return combo_norm(out), scale


CONVENTIONS = ("corrected", "printed")


def builtin_cochains(config: AinfConfig, name: str, idx: int,
                     convention: str = "printed") -> Cochain:
    """Cochains f0_z, f0_w, f1, f1p, f2_z, f2_w of the variation equations.

    'printed' gives the components exactly as stated in the source; 'corrected'
    flips f0_w and the (XiL, Eta) component of f2_w, which is what makes the
    variation equations hold numerically.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    fix = convention == "corrected"
    z = config.z
    if name == "f0_z":
        return Cochain(0, 1, lambda a: {XiL(idx): 1.0}, name=f"f0_z({idx})")
    if name == "f0_w":
        s = 1.0 if fix else -1.0
        return Cochain(0, 1, lambda a: {XiP(idx): s}, name=f"f0_w({idx})")
    if name in ("f1", "f1p"):
        prime = name == "f1p"

        def fn(a):
            (x,) = a
            if x.i != idx or x.kind not in ("Theta", "Eta"):
                return {}
            zj = z[x.j]
            v = zj if prime else -np.conj(zj)
            return {x: v if x.kind == "Theta" else -v}

        return Cochain(1, 0, fn, name=f"{name}({idx})")
    if name == "f2_z":
        def fn(a):
            x, y = a
            if x.kind == "XiP" and y.kind == "Theta" and y.j == idx:
                return {y: -1.0}
            if x.kind == "Eta" and x.j == idx and y.kind == "XiP":
                return {x: 1.0}
            return {}

        return Cochain(2, -1, fn, name=f"f2_z({idx})")
    if name == "f2_w":
        s = 1.0 if fix else -1.0

        def fn(a):
            x, y = a
            if x.kind == "Theta" and x.i == idx and y.kind == "XiL":
                return {x: 1.0}
            if x.kind == "XiL" and y.kind == "Eta" and y.i == idx:
                return {y: s}
            return {}

        return Cochain(2, -1, fn, name=f"f2_w({idx})")
    raise ValueError(f"unknown cochain {name!r}")


PARAMS = ("z", "w", "zbar", "wbar")


def _mu_shift(config, string, which, idx, delta):
    return mu(config.perturbed(which, idx, delta), string)


def wirtinger(config, string, which, idx, bar, h):
    """Central Wirtinger difference of mu's coefficients, Richardson-extrapolated."""
    def central(hh):
        out = {}
        sg = 1 if bar else -1
        for dlt, wt in ((hh, 1), (-hh, -1), (1j * hh, sg * 1j), (-1j * hh, -sg * 1j)):
            for k, v in _mu_shift(config, string, which, idx, dlt).items():
                combo_add(out, k, wt * v / (4 * hh))
        return out

    d1 = central(h)
    d2 = central(h / 2)
    return {k: (4 * d2.get(k, 0) - d1.get(k, 0)) / 3 for k in set(d1) | set(d2)}


def _delta_terms(config, string, param, idx):
    """Lattice delta contributions of the g* derivative formulas at n = 3."""
    t, runs, letters = string_type(tuple(string))
    if t != "I" or len(string) != 3:
        return {}
    t1, _, t2 = letters
    i, j, ip, jp = t1.i, t1.j, t2.i, t2.j
    out = Theta(i, jp)
    if param == "zbar" and i == ip and idx == j:
        return {out: -1.0}
    if param == "wbar" and j == jp and idx == ip:
        return {out: -1.0}
    return {}


def variation_sides(config, param, idx, string, h=1e-3, form="raw",
                    convention="corrected", delta_terms=True):
    """Left and right sides of the variation equation for one parameter."""
    if param not in PARAMS:
        raise ValueError(f"param must be one of {PARAMS}")
    string = tuple(string)
    n = len(string)
    A = config.A
    which = param[0]
    bar = param.endswith("bar")
    lhs = wirtinger(config, string, which, idx, bar, h)
    if bar:
        lhs = {k: A * v for k, v in lhs.items()}
    fix = convention == "corrected"
    if param == "z":
        rhs = gerstenhaber(m_cochain(config, n + 1), builtin_cochains(config, "f0_z", idx, convention))(string)
        conn = None
    elif param == "w":
        rhs = gerstenhaber(m_cochain(config, n + 1), builtin_cochains(config, "f0_w", idx, convention))(string)
        conn = builtin_cochains(config, "f1", idx, convention)
        cscale = 1 / A if fix else 1.0
    elif param == "zbar":
        rhs = gerstenhaber(m_cochain(config, n - 1), builtin_cochains(config, "f2_z", idx, convention))(string) if n > 2 else {}
        conn = None
    else:
        rhs = gerstenhaber(m_cochain(config, n - 1), builtin_cochains(config, "f2_w", idx, convention))(string) if n > 2 else {}
        conn = builtin_cochains(config, "f1p", idx, convention)
        cscale = 1.0
    if delta_terms and fix:
        for k, v in _delta_terms(config, string, param, idx).items():
            combo_add(rhs, k, v)
    if conn is not None:
        if form == "raw":
            for k, v in gerstenhaber(m_cochain(config, n), conn)(string).items():
                combo_add(rhs, k, cscale * v)
        elif form == "nabla":
            # covariant derivative: move the frame terms to the left side
            m_x = mu(config, string)
            for k, v in m_x.items():
                for kk, vv in conn((k,)).items():
                    combo_add(lhs, kk, cscale * v * vv)
            for pos, x in enumerate(string):
                for y, c in conn((x,)).items():
                    for k, v in mu(config, string[:pos] + (y,) + string[pos + 1:]).items():
                        combo_add(lhs, k, -cscale * c * v)
        else:
            raise ValueError("form must be 'raw' or 'nabla'")
    return lhs, rhs


def variation_residual(config, param, idx, string, h=1e-3, form="raw",
                       convention="corrected", delta_terms=True) -> float:
    """Max-norm of LHS - RHS of the variation equation on one string."""
    lhs, rhs = variation_sides(config, param, idx, string, h, form, convention, delta_terms)
    return combo_diff(lhs, rhs)


# ---------------------------------------------------------------- scalar identities

def quad_residual(L: Lattice, a: int, b: int, z, zp, w, wp,
                  p: SeriesParams = DEFAULT) -> tuple[float, float]:
    """Quadratic identity for g* at (z, z', w, w'), with the lattice delta terms.

    Points may be complex or StratifiedPoint; sums and negatives keep the
    stratum exactly.  Returns (|lhs - rhs|, scale).
    """
    z, zp, w, wp = (classify(L, x, p.snap_eps) for x in (z, zp, w, wp))
    zz = shifted(L, z, zp)
    ww = shifted(L, w, wp)
    mz = negate(L, z)

    def g(m, n, x, y):
        return g_star(m, n, x, y, L, p).value

    terms = []
    for a1 in range(a + 1):
        terms.append(math.comb(a, a1) * g(a - a1, 0, z, w) * g(a1, b, zp, ww))
    for b1 in range(b + 1):
        terms.append(-math.comb(b, b1) * g(0, b1, zp, wp) * g(a, b - b1, zz, w))
    terms.append(g(0, 0, mz, wp) * g(a, b, zz, ww))
    rhs = []
    if b == 0 and ww.on_lattice:
        rhs.append(g(a + 1, 0, z, w) / (a + 1))
    if a == 0 and zz.on_lattice:
        rhs.append(-pairing(L, zz.value, w.value) / (b + 1) * g(0, b + 1, zp, wp))
    if w.on_lattice:
        rhs.append(g(a + 1, b, zp, wp) / (a + 1))
    if z.on_lattice:
        rhs.append(-pairing(L, z.value, w.value) * g(a, b + 1, zp, ww))
    if wp.on_lattice:
        rhs.append(g(a + 1, b, zz, w))
    if zp.on_lattice:
        rhs.append(-pairing(L, zp.value, ww.value) / (b + 1) * g(a, b + 1, z, w))
    res = abs(sum(terms) - sum(rhs))
    scale = max([abs(t) for t in terms + rhs] + [0.0])
    return res, scale


def aybe_residual(L: Lattice, z, zp, w, wp, p: SeriesParams = DEFAULT) -> tuple[float, float]:
    """Scalar associative Yang-Baxter equation for g*_{0,0} at generic points."""
    def g(x, y):
        return g_star(0, 0, x, y, L, p).value

    t = [g(z, w) * g(zp, w + wp), -g(zp, wp) * g(z + zp, w), g(-z, wp) * g(z + zp, w + wp)]
    return abs(sum(t)), max(abs(x) for x in t)
