"""treezeta command line.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 mathematical error (pole, zero, violated setting).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .euler_ihara import NotUnimodular, chi_at, ihara_reciprocal, is_unimodular, transition_weight
from .graph_core import GraphError, load_graph
from .lad import ROOT, DiagramError, load_lad, zeta_pclosed, zeta_pclosed_series
from .perm_groups import GroupError
from .verify import SUITES, fmt, run_suite
from .weighted_paths import SettingError, dirichlet_coefficients_wlit, setting_gamma_ok
from .zeta_wlit import HypothesisError, IndeterminateError, PoleError, zeta_det, zeta_series


class UsageError(ValueError):
    pass


class MathError(ArithmeticError):
    pass


def parse_scalar(text: str):
    """An integer selects exact mode; "re" or "re,im" selects floating mode."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot parse {text!r} as an integer or re[,im]")


def parse_x(text: str):
    """Ihara variable: integers and p/q are exact, anything else floating."""
    try:
        return Fraction(text.strip())
    except ValueError:
        return parse_scalar(text)


def _value_line(z) -> str:
    if z.is_pole:
        raise MathError("pole at this s")
    if z.is_pole_candidate:
        raise MathError("denominator numerically zero: pole candidate at this s")
    return fmt(z.value)


def cmd_zeta(args) -> int:
    g = load_graph(args.graph)
    if not setting_gamma_ok(g):
        raise MathError("weights violate the growth setting (some pair has both weights 2)")
    s = parse_scalar(args.s)
    print(_value_line(zeta_det(g, getattr(args, "from"), args.to, s)))
    if args.series is not None:
        print(f"series L={args.series} {fmt(zeta_series(g, getattr(args, 'from'), args.to, s, args.series))}")
    return 0


def cmd_coeffs(args) -> int:
    g = load_graph(args.graph)
    table = dirichlet_coefficients_wlit(g, getattr(args, "from"), args.to, args.n_max)
    print("n\ta_n\tb_n")
    body = table.to_tsv()
    if body:
        print(body)
    return 0


def cmd_chi(args) -> int:
    g = load_graph(args.graph)
    print(fmt(chi_at(g, args.at)))
    return 0


def cmd_unimodular(args) -> int:
    print("true" if is_unimodular(load_graph(args.graph)) else "false")
    return 0


def cmd_ihara(args) -> int:
    g = load_graph(args.graph)
    print(fmt(ihara_reciprocal(transition_weight(g), parse_x(args.x))))
    return 0


def _lad_start(text: str) -> str:
    if text == ROOT:
        return ROOT
    if text.startswith("color:"):
        return text[len("color:"):]
    raise UsageError('--from must be "root" or "color:ID"')


def cmd_lad_zeta(args) -> int:
    d = load_lad(args.lad)
    if d.inversion is None:
        raise UsageError("diagram has no inversion and X_a, X_ā differ in size; add an \"inversion\" map")
    r = _lad_start(getattr(args, "from"))
    s = parse_scalar(args.s)
    print(_value_line(zeta_pclosed(d, d.iota(), args.root, r, args.to, s)))
    if args.series is not None:
        val = zeta_pclosed_series(d, d.iota(), args.root, r, args.to, s, args.series)
        print(f"series L={args.series} {fmt(val)}")
    return 0


def cmd_verify(args) -> int:
    print(f"suite {args.suite} seed {args.seed} instances {args.instances}")
    out = run_suite(args.suite, args.seed, args.instances, args.jobs)
    for line in out.lines:
        print(line)
    print(f"summary ok={out.exact + out.approx} fail={out.failures} skip={out.skips}")
    return 1 if out.failures else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treezeta", description="Double-coset zeta functions of tree actions.")
    sub = p.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zeta", help="Z_{u->w}(s) by the determinant formula")
    z.add_argument("--graph", required=True)
    z.add_argument("--from", required=True)
    z.add_argument("--to", required=True)
    z.add_argument("--s", required=True)
    z.add_argument("--series", type=int)
    z.set_defaults(func=cmd_zeta)

    c = sub.add_parser("coeffs", help="Dirichlet coefficient table")
    c.add_argument("--graph", required=True)
    c.add_argument("--from", required=True)
    c.add_argument("--to", required=True)
    c.add_argument("--n-max", dest="n_max", type=int, required=True)
    c.set_defaults(func=cmd_coeffs)

    x = sub.add_parser("chi", help="Euler-Poincaré characteristic at a vertex or edge")
    x.add_argument("--graph", required=True)
    x.add_argument("--at", required=True)
    x.set_defaults(func=cmd_chi)

    u = sub.add_parser("unimodular", help="balance test over a cycle basis")
    u.add_argument("--graph", required=True)
    u.set_defaults(func=cmd_unimodular)

    i = sub.add_parser("ihara", help="det(I - xT) for the transition weight T")
    i.add_argument("--graph", required=True)
    i.add_argument("--x", required=True)
    i.set_defaults(func=cmd_ihara)

    lz = sub.add_parser("lad-zeta", help="zeta function of a local action diagram")
    lz.add_argument("--lad", required=True)
    lz.add_argument("--root", required=True)
    lz.add_argument("--from", required=True, help='"root" or "color:ID"')
    lz.add_argument("--to", required=True)
    lz.add_argument("--s", required=True)
    lz.add_argument("--series", type=int)
    lz.set_defaults(func=cmd_lad_zeta)

    v = sub.add_parser("verify", help="randomized verification suites")
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--instances", type=int, default=20)
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphError, DiagramError, GroupError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (MathError, PoleError, IndeterminateError, SettingError, HypothesisError, NotUnimodular,
            ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
