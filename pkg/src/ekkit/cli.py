"""Command line interface: ekkit {eval, verify, table, corb}.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import classical as cl
from . import harness as hs
from .ekseries import ek, f_star, g_star
from .lattice import tau_lattice
from .symrec import reduce_gab

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """'re,im' or a single real number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")


FN_ARGS = {
    "f": ("m", "n", "z", "w", "tau"),
    "g": ("a", "b", "z", "w", "tau"),
    "ek": ("a", "b", "z", "w", "tau"),
    "theta": ("z", "tau"),
    "wp": ("z", "tau"),
    "zeta": ("z", "tau"),
    "Z": ("z", "tau"),
    "F": ("z", "w", "tau"),
    "e2k": ("k", "tau"),
}
INT_ARGS = {"m", "n", "a", "b", "k", "deriv"}


def _parse_kv(fn: str, tokens) -> dict:
    out = {"tau": 1j}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep:
            raise UsageError(f"argument {tok!r} is not key=value")
        if key not in FN_ARGS[fn] and not (fn == "wp" and key == "deriv"):
            raise UsageError(f"{fn} takes {', '.join(FN_ARGS[fn])}; got {key!r}")
        try:
            out[key] = int(val) if key in INT_ARGS else parse_complex(val)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(str(exc)) from None
    missing = [k for k in FN_ARGS[fn] if k not in out]
    if missing:
        raise UsageError(f"{fn} needs {', '.join(missing)}")
    return out


def _pair(v):
    v = complex(v)
    return [v.real, v.imag]


def cmd_eval(ns) -> int:
    kv = _parse_kv(ns.fn, ns.args)
    tau = kv["tau"]
    L = tau_lattice(tau)
    out = {"fn": ns.fn}
    if ns.fn in ("f", "g", "ek"):
        i, j = (kv["m"], kv["n"]) if ns.fn == "f" else (kv["a"], kv["b"])
        fun = {"f": f_star, "g": g_star, "ek": ek}[ns.fn]
        r = fun(i, j, kv["z"], kv["w"], L)
        out.update(value=_pair(r.value), radius=r.radius_used, tail_bound=r.tail_bound)
    elif ns.fn == "theta":
        out["value"] = _pair(cl.theta(kv["z"], tau))
    elif ns.fn == "wp":
        out["value"] = _pair(cl.weier_p(kv["z"], L, deriv=kv.get("deriv", 0)))
    elif ns.fn == "zeta":
        out["value"] = _pair(cl.weier_zeta(kv["z"], L))
    elif ns.fn == "Z":
        out["value"] = _pair(cl.Z_fn(kv["z"], L))
    elif ns.fn == "F":
        out["value"] = _pair(cl.kronecker_F(kv["z"], kv["w"], tau))
    elif ns.fn == "e2k":
        k = kv["k"]
        out["value"] = _pair(cl.eisenstein2_star(L) if k == 1 else cl.eisenstein(L, 2 * k))
    print(json.dumps(out))
    return EXIT_OK


def cmd_verify(ns) -> int:
    if not ns.all and not ns.check:
        raise UsageError("give --check <id> or --all")
    checks = hs.CHECK_IDS if ns.all else (ns.check,)
    taus = (ns.tau,) if ns.tau is not None else hs.SUITE_TAUS
    seeds = (ns.seed,) if ns.seed is not None else hs.SUITE_SEEDS
    env = hs.Env(tol=ns.tol, tol_scale=ns.tol_scale, sign_bug=ns.debug_sign_bug)
    reports = hs.run_suite(env, checks, taus, seeds, workers=ns.workers)
    lines = [r.to_json(timing=not ns.no_timing) for r in reports]
    text = "\n".join(lines) + "\n"
    if ns.out:
        with open(ns.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    summary = hs.summarize(reports)
    print(f"{summary['passed']}/{summary['total']} passed", file=sys.stderr)
    return EXIT_OK if not summary["failed"] else EXIT_FAIL


def cmd_table(ns) -> int:
    text = hs.emit_table(ns.kind, ns.amax, ns.bmax, ns.z, ns.w, ns.tau, ns.format, ns.out)
    if not ns.out:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_corb(ns) -> int:
    if ns.a < 0 or ns.b < 0:
        raise UsageError("a and b must be nonnegative")
    print(reduce_gab(ns.a, ns.b).text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ekkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("eval", help="evaluate one function")
    p.add_argument("--fn", required=True, choices=sorted(FN_ARGS))
    p.add_argument("--args", nargs="*", default=[], metavar="KEY=VALUE",
                   help="e.g. a=1 b=2 z=0.3,0.1 w=0.2,0.4 tau=0,1")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("verify", help="run verification checks")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--check", choices=hs.CHECK_IDS)
    g.add_argument("--all", action="store_true")
    p.add_argument("--tau", type=parse_complex, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tol", type=float, default=None, help="override every threshold")
    p.add_argument("--tol-scale", type=float, default=1.0, help="multiply thresholds")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0")
    p.add_argument("--out", default=None)
    p.add_argument("--debug-sign-bug", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("table", help="write a value table")
    p.add_argument("--kind", required=True, choices=hs.TABLE_KINDS)
    p.add_argument("--amax", type=int, default=3)
    p.add_argument("--bmax", type=int, default=4)
    p.add_argument("--z", type=parse_complex, default=complex(0.31, 0.17))
    p.add_argument("--w", type=parse_complex, default=complex(0.12, 0.44))
    p.add_argument("--tau", type=parse_complex, default=1j)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(run=cmd_table)

    p = sub.add_parser("corb", help="print the exact polynomial for g*_{a,b}")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.set_defaults(run=cmd_corb)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return ns.run(ns)
    except (UsageError, ValueError) as exc:
        print(f"ekkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
