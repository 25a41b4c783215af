"""Exact polynomial expressions for g*_{a,b}(z, w).

Every g*_{a,b}(z, w) is a polynomial with rational coefficients in

    G00 = g*_{0,0}(z,w)   G01 = g*_{0,1}(z,w)
    Zb0, Zb1, Zb2 = g*_{0,b}(z,0)    Wb0, Wb1, Wb2 = g*_{0,b}(w,0)
    C(m,n) = g*_{m,n}(0,0)  (zero when m+n is even)

obtained from the quadratic recursions specialized at z'=w'=0 and friends.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .ekseries import DEFAULT, SeriesParams, g_star
from .lattice import Lattice, classify

_NAMED = ("G00", "G01", "Zb0", "Zb1", "Zb2", "Wb0", "Wb1", "Wb2")


def const_name(m: int, n: int) -> str:
    return f"C({m},{n})"


def _gen_key(name: str):
    if name in _NAMED:
        return (0, _NAMED.index(name), 0)
    m, n = name[2:-1].split(",")
    return (1, int(m), int(n))


def _mono_key(mono):
    # graded-lex: higher total degree first, then lexicographic in generator order
    return (-sum(e for _, e in mono), [(_gen_key(g), -e) for g, e in mono])


class MPoly:
    """Immutable sparse polynomial; monomials are sorted tuples of (generator, exponent)."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
        self._terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def gen(cls, name: str) -> "MPoly":
        if name not in _NAMED and not name.startswith("C("):
            raise ValueError(f"unknown generator {name!r}")
        return cls({((name, 1),): 1})

    @classmethod
    def const(cls, c) -> "MPoly":
        return cls({(): c})

    @property
    def terms(self):
        return dict(self._terms)

    def __add__(self, other):
        other = _lift(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return MPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _mono_mul(m1, m2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return MPoly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "MPoly":
        c = Fraction(c)
        return MPoly({k: v * c for k, v in self._terms.items()})

    def __eq__(self, other):
        return isinstance(other, MPoly) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def generators(self) -> set[str]:
        return {g for mono in self._terms for g, _ in mono}

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0]))

    def text(self) -> str:
        """Canonical form 'coeff * G00^2 * Zb1 + ...' with rationals as p/q."""
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = [g if e == 1 else f"{g}^{e}" for g, e in mono]
            body = " * ".join([_frac(abs(c))] + factors) if mono else _frac(abs(c))
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = text

    def __repr__(self):
        return f"MPoly({self.text()!r})"


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _lift(x) -> MPoly:
    return x if isinstance(x, MPoly) else MPoly.const(x)


def _mono_mul(m1, m2):
    d = dict(m1)
    for g, e in m2:
        d[g] = d.get(g, 0) + e
    return tuple(sorted(d.items(), key=lambda ge: _gen_key(ge[0])))


ZERO = MPoly()
ONE = MPoly.const(1)


def mpoly_ops(p: MPoly, q, op: str) -> MPoly:
    """Ring operations by name: 'add', 'mul', or 'scale' (q a rational)."""
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown op {op!r}")


def C(m: int, n: int) -> MPoly:
    """Constant g*_{m,n}(0,0); vanishes by parity when m+n is even."""
    if (m + n) % 2 == 0:
        return ZERO
    return MPoly.gen(const_name(m, n))


@lru_cache(maxsize=None)
def _one_var(a: int, b: int, side: str) -> MPoly:
    """g*_{a,b}(x, 0) in terms of {side}b0..2 and constants, side in {'Zb', 'Wb'}."""
    if a < 0 or b < 0:
        raise ValueError("indices must be nonnegative")
    if a == 0 and b <= 2:
        return MPoly.gen(f"{side}{b}")
    X = lambda p, q: _one_var(p, q, side)  # noqa: E731
    if a == 0:
        # 2*(z0-rec) - (z0-rec2) at (0, b-1) isolates g_{0,b}
        bb = b - 1
        rhs = X(0, 0) * C(0, bb)
        rhs -= _sum(math.comb(bb, b1) * C(0, b1) * X(0, bb - b1) for b1 in range(bb + 1))
        rhs += -X(0, 0) * X(0, bb)  # g_{0,0}(-x,0) = -g_{0,0}(x,0)
        rhs -= C(1, bb)
        rhs = rhs.scale(2)
        rhs -= C(0, 0) * X(0, bb)
        rhs += _sum(math.comb(bb, b1) * X(0, b1) * X(0, bb - b1) for b1 in range(bb + 1))
        return rhs.scale(Fraction(b, b - 2))
    # z0-rec2 at (a-1, b) solved for g_{a,b}
    p = a - 1
    rhs = X(p, b + 1)
    rhs += _sum(math.comb(p, a1) * C(p - a1, 0) * X(a1, b) for a1 in range(p + 1))
    rhs -= _sum(math.comb(b, b1) * X(0, b1) * X(p, b - b1) for b1 in range(b + 1))
    if b == 0:
        rhs -= C(a, 0).scale(Fraction(1, a))
    return rhs.scale(Fraction(a, a + 1))


def _sum(it) -> MPoly:
    out = ZERO
    for x in it:
        out = out + x
    return out


def _at_zero_w(p: int, q: int) -> MPoly:
    """g*_{p,q}(0, w) = (-1)^(p+q+1) g*_{q,p}(w, 0)."""
    v = _one_var(q, p, "Wb")
    return -v if (p + q) % 2 == 0 else v


def _rhs(a: int, b: int):
    """Right sides of the two-variable recursions at (a, b)."""
    G = reduce_gab
    Z = lambda p, q: _one_var(p, q, "Zb")  # noqa: E731
    r1 = _sum(math.comb(a, a1) * G(a - a1, 0) * _at_zero_w(a1, b) for a1 in range(a + 1))
    r1 -= _sum(math.comb(b, b1) * C(0, b1) * G(a, b - b1) for b1 in range(b + 1))
    r1 += -Z(0, 0) * G(a, b)
    r2 = _sum(math.comb(a, a1) * C(a - a1, 0) * G(a1, b) for a1 in range(a + 1))
    r2 -= _sum(math.comb(b, b1) * G(0, b1) * Z(a, b - b1) for b1 in range(b + 1))
    r2 += _at_zero_w(0, 0) * G(a, b)
    return r1, r2


def _solve(a: int, b: int):
    """(g_{a+1,b}, g_{a,b+1}) from the 2x2 system at (a, b), (a, b) != (0, 0)."""
    r1, r2 = _rhs(a, b)
    # x - y/(b+1) = r1,  x/(a+1) - y = r2
    det = Fraction(1, (a + 1) * (b + 1)) - 1
    x = (r2.scale(Fraction(1, b + 1)) - r1).scale(1 / det)
    y = (r2 - r1.scale(Fraction(1, a + 1))).scale(1 / det)
    return x, y


@lru_cache(maxsize=None)
def reduce_gab(a: int, b: int) -> MPoly:
    """Exact polynomial for g*_{a,b}(z, w) over the generator set."""
    if a < 0 or b < 0:
        raise ValueError("indices must be nonnegative")
    if (a, b) == (0, 0):
        return MPoly.gen("G00")
    if (a, b) == (0, 1):
        return MPoly.gen("G01")
    if (a, b) == (1, 0):
        r1, _ = _rhs(0, 0)
        return MPoly.gen("G01") + r1
    if a >= 1:
        return _solve(a - 1, b)[0]
    return _solve(0, b - 1)[1]


def reduce_gab_z(a: int, b: int) -> MPoly:
    """Exact polynomial for g*_{a,b}(z, 0) in Zb0, Zb1, Zb2 and constants."""
    return _one_var(a, b, "Zb")


def constants_used(polys) -> list[tuple[int, int]]:
    out = set()
    for p in polys:
        for g in p.generators():
            if g.startswith("C("):
                m, n = g[2:-1].split(",")
                out.add((int(m), int(n)))
    return sorted(out)


class MissingGenerator(KeyError):
    pass


def eval_poly(p: MPoly, env) -> complex:
    """Substitute numeric values for every generator in p."""
    total = 0j
    for mono, c in p.sorted_terms():
        v = complex(c.numerator) / c.denominator
        for g, e in mono:
            if g not in env:
                raise MissingGenerator(g)
            v *= complex(env[g]) ** e
        total += v
    return total


def generator_env(z, w, L: Lattice, consts=(), p: SeriesParams = DEFAULT) -> dict:
    """Numeric values of the generators at (z, w), plus the requested constants."""
    zs = classify(L, z, p.snap_eps)
    ws = classify(L, w, p.snap_eps)
    env = {"G00": g_star(0, 0, zs, ws, L, p).value,
           "G01": g_star(0, 1, zs, ws, L, p).value}
    for k in range(3):
        env[f"Zb{k}"] = g_star(0, k, zs, 0j, L, p).value
        env[f"Wb{k}"] = g_star(0, k, ws, 0j, L, p).value
    for m, n in consts:
        env[const_name(m, n)] = g_star(m, n, 0j, 0j, L, p).value
    return env
