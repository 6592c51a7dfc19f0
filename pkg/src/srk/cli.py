"""Command-line front end.

Exit codes: 0 on success, 1 on usage or domain errors, 2 when a checked
inequality or rigidity statement fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .calculus import (
    diff_quotient,
    sigma_distance,
    spherical_expansion,
    spherical_pair,
    taylor_expansion,
)
from .errors import SRKError
from .mobius import (
    IDENTITY,
    QuatMatrix2,
    RegularMobius,
    left_action,
    mobius_fixing,
    right_action,
)
from .mobius import fixed_points as mobius_fixed_points
from .quaternion import Quaternion, format_quaternion, parse_quaternion
from .rational import RegularQuotient, as_regular, reciprocal
from .schwarz_pick import Tolerances, check_rigidity
from .series import StarSeries, conjugate, star_mul, symmetrize


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


# -- argument types -------------------------------------------------------------

def quat(text: str) -> Quaternion:
    try:
        return parse_quaternion(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_json(text: str):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    elif not text.lstrip().startswith(("[", "{")) and Path(text).is_file():
        text = Path(text).read_text()
    return json.loads(text)


def function_arg(text: str):
    """Series literal (JSON array) or quotient literal (JSON object), inline or from a file."""
    try:
        obj = _load_json(text)
        if isinstance(obj, dict):
            return RegularQuotient.from_json(obj)
        return StarSeries.from_json(obj)
    except (ValueError, KeyError, TypeError, OSError) as exc:
        raise argparse.ArgumentTypeError(f"bad function literal: {exc}") from None


def series_arg(text: str) -> StarSeries:
    f = function_arg(text)
    if not isinstance(f, StarSeries):
        raise argparse.ArgumentTypeError("a series literal (JSON array) is required")
    return f


def matrix_arg(text: str) -> QuatMatrix2:
    try:
        return QuatMatrix2.from_rows([[parse_quaternion(x) for x in row] for row in _load_json(text)])
    except (ValueError, TypeError, OSError) as exc:
        raise argparse.ArgumentTypeError(f"bad matrix literal: {exc}") from None


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


# -- output -------------------------------------------------------------------------

def _text(value) -> str:
    if isinstance(value, Quaternion):
        return format_quaternion(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, (list, tuple)):
        return "\n".join(_text(v) for v in value)
    if isinstance(value, dict):
        return "\n".join(f"{k}: {_text(v) if not isinstance(v, (dict, list)) else json.dumps(v)}"
                         for k, v in value.items())
    return str(value)


def _jsonable(value):
    if isinstance(value, Quaternion):
        return format_quaternion(value)
    if isinstance(value, (StarSeries, RegularQuotient)):
        return value.to_json()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


# -- commands ---------------------------------------------------------------------

def cmd_eval(args):
    return args.f(args.q)


def cmd_mul(args):
    f, g = args.f, args.g
    if isinstance(f, StarSeries) and isinstance(g, StarSeries):
        return star_mul(f, g)
    return as_regular(f) * as_regular(g)


def cmd_conj(args):
    return args.f.conjugate() if isinstance(args.f, RegularQuotient) else conjugate(args.f)


def cmd_symm(args):
    return args.f.symmetrize() if isinstance(args.f, RegularQuotient) else symmetrize(args.f)


def cmd_recip(args):
    if isinstance(args.f, RegularQuotient):
        return args.f.inverse()
    return reciprocal(args.f)


def cmd_quotient(args):
    Q = RegularQuotient(args.f, args.g, args.side)
    if args.q is not None:
        return {"quotient": Q.to_json(), "value": Q(args.q)}
    return Q


def cmd_mobius_eval(args):
    return RegularMobius(args.q0, args.u)(args.q)


def cmd_mobius_fix(args):
    a, u = mobius_fixing(args.q0, args.v)
    return {"a": a, "u": u}


def cmd_mobius_fixed_points(args):
    pts = mobius_fixed_points((args.a, args.u))
    if pts is IDENTITY:
        return "identity"
    return [p if isinstance(p, Quaternion) else {"sphere": [p[1], p[2]]} for p in pts]


def cmd_mobius_act(args):
    if args.side == "right":
        Q = right_action(args.f, args.matrix)
    else:
        Q = left_action(args.matrix, args.f)
    if args.q is not None:
        return {"quotient": Q.to_json(), "value": Q(args.q)}
    return Q


def cmd_derive(args):
    f, q0 = args.f, args.q0
    if args.kind == "cullen":
        d = f.cullen_derivative()
        return {"derivative": d, "value": d(q0)}
    if args.kind == "spherical":
        pair = spherical_pair(f, q0)
        return {"spherical_value": pair.value, "spherical_derivative": pair.derivative}
    return {"quotient": diff_quotient(f, q0)}


def cmd_expand(args):
    if args.kind == "taylor":
        exp = taylor_expansion(args.f, args.q0, args.order)
    else:
        exp = spherical_expansion(args.f, args.q0, args.order)
    return {"kind": args.kind, "q0": args.q0, "coefficients": list(exp.coeffs)}


def cmd_sigma(args):
    return sigma_distance(args.q, args.p)


def cmd_check_sp(args):
    report = harness.run_check(args.family, args.count, args.seed, args.radius,
                               Tolerances.from_env(), args.workers)
    return report, 0 if report["summary"]["passed"] else 2


def cmd_falsify(args):
    report = harness.falsify(args.budget, args.seed, args.radius, Tolerances.from_env(),
                             args.workers)
    return report, 0 if report["summary"]["passed"] else 2


def cmd_rigidity(args):
    return check_rigidity(args.f, args.q0).to_json()


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format")
    common.add_argument("--out", help="write output to this file instead of stdout")

    p = _Parser(prog="srk", description="Slice regular functions on the quaternionic unit ball. "
                "Quaternions are written w+xi+yj+zk; series are JSON arrays of quaternion "
                "strings (index = power), inline or @file; quotients are JSON objects "
                "{side, denom, numer}. SRK_TOLERANCE_SCALE scales the default tolerances.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, parent=sub):
        sp = parent.add_parser(name, parents=[common], help=help_text, description=help_text,
                               formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        sp.set_defaults(func=func)
        return sp

    sp = add("eval", cmd_eval, "evaluate a series or quotient at a point")
    sp.add_argument("--f", type=function_arg, required=True)
    sp.add_argument("--q", type=quat, required=True)

    sp = add("mul", cmd_mul, "regular product f * g")
    sp.add_argument("--f", type=function_arg, required=True)
    sp.add_argument("--g", type=function_arg, required=True)

    for name, func, text in (("conj", cmd_conj, "regular conjugate f^c"),
                             ("symm", cmd_symm, "symmetrization f^s"),
                             ("recip", cmd_recip, "regular reciprocal f^{-*}")):
        sp = add(name, func, text)
        sp.add_argument("--f", type=function_arg, required=True)

    sp = add("quotient", cmd_quotient, "build f^{-*} * g (left) or g * f^{-*} (right)")
    sp.add_argument("--f", type=series_arg, required=True, help="denominator series")
    sp.add_argument("--g", type=series_arg, required=True, help="numerator series")
    sp.add_argument("--side", choices=("left", "right"), default="left")
    sp.add_argument("--q", type=quat, help="also evaluate at this point")

    mob = sub.add_parser("mobius", help="regular Möbius transformations")
    msub = mob.add_subparsers(dest="mobius_command", required=True, parser_class=_Parser)
    sp = add("eval", cmd_mobius_eval, "evaluate (q - q0) * (1 - q q0bar)^{-*} u", msub)
    sp.add_argument("--q0", type=quat, required=True)
    sp.add_argument("--u", type=quat, default=parse_quaternion("1"), help="unit quaternion")
    sp.add_argument("--q", type=quat, required=True)
    sp = add("fix", cmd_mobius_fix, "parameters (a, u) of the map fixing q0 labelled by v", msub)
    sp.add_argument("--q0", type=quat, required=True)
    sp.add_argument("--v", type=quat, required=True)
    sp = add("fixed-points", cmd_mobius_fixed_points,
             "fixed points of (1 - q abar)^{-*} * (q - a) u in the closed ball", msub)
    sp.add_argument("--a", type=quat, required=True)
    sp.add_argument("--u", type=quat, required=True)
    sp = add("act", cmd_mobius_act, "matrix action on a function", msub)
    sp.add_argument("--matrix", type=matrix_arg, required=True,
                    help='JSON [[a, c], [b, d]] of quaternion strings')
    sp.add_argument("--f", type=function_arg, required=True)
    sp.add_argument("--side", choices=("right", "left"), default="right",
                    help="right: (fc + d)^{-*} * (fa + b); left: (af + b) * (cf + d)^{-*}")
    sp.add_argument("--q", type=quat, help="also evaluate at this point")

    sp = add("derive", cmd_derive, "Cullen derivative, spherical derivative or R_{q0} f")
    sp.add_argument("--kind", choices=("cullen", "spherical", "R"), required=True)
    sp.add_argument("--f", type=function_arg, required=True)
    sp.add_argument("--q0", type=quat, required=True)

    sp = add("expand", cmd_expand, "Taylor (*-power) or spherical expansion coefficients")
    sp.add_argument("--kind", choices=("taylor", "spherical"), required=True)
    sp.add_argument("--f", type=function_arg, required=True)
    sp.add_argument("--q0", type=quat, required=True)
    sp.add_argument("--order", type=int, default=4, help="expansion order N")

    sp = add("sigma", cmd_sigma, "sigma distance between two quaternions")
    sp.add_argument("--q", type=quat, required=True)
    sp.add_argument("--p", type=quat, required=True)

    sp = add("check-sp", cmd_check_sp, "sweep the Schwarz-Pick inequalities over a family")
    sp.add_argument("--family", choices=harness.FAMILIES, default="mixed", help="self-map family")
    sp.add_argument("--count", type=_positive_int, default=100, help="number of (f, q0, q) samples")
    sp.add_argument("--seed", type=int, default=0, help="seed for maps and points")
    sp.add_argument("--radius", type=float, default=0.95, help="points satisfy |q0|, |q| <= radius")
    sp.add_argument("--workers", type=_positive_int, default=1, help="worker processes")

    sp = add("falsify", cmd_falsify, "search for a violated inequality (exit 2 if found)")
    sp.add_argument("--budget", type=_positive_int, default=1000, help="number of samples")
    sp.add_argument("--seed", type=int, default=0, help="seed for maps and points")
    sp.add_argument("--radius", type=float, default=0.95, help="points satisfy |q0|, |q| <= radius")
    sp.add_argument("--workers", type=_positive_int, default=1, help="worker processes")

    sp = add("rigidity", cmd_rigidity, "evaluate the rigidity conditions at a fixed point")
    sp.add_argument("--f", type=function_arg, required=True)
    sp.add_argument("--q0", type=quat, required=True)
    return p


def _render(command: str, result, args) -> str:
    seeded = isinstance(result, dict) and "meta" in result
    if args.format == "json":
        if seeded:
            payload = result
        else:
            payload = {"command": command, "seed": getattr(args, "seed", None),
                       "result": _jsonable(result)}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if seeded:
        summary = result["summary"]
        lines = [f"seed: {result['meta']['seed']}", f"count: {result['meta']['count']}"]
        lines += [f"{k}: {_text(v) if not isinstance(v, dict) else json.dumps(_jsonable(v))}"
                  for k, v in summary.items()]
        return "\n".join(lines) + "\n"
    result = _jsonable(result) if isinstance(result, (StarSeries, RegularQuotient)) else result
    if isinstance(result, dict):
        result = {k: (v if isinstance(v, (Quaternion, float, str, int)) else _jsonable(v))
                  for k, v in result.items()}
    return _text(result) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    command = args.command if args.command != "mobius" else f"mobius {args.mobius_command}"
    code = 0
    try:
        result = args.func(args)
        if type(result) is tuple:  # (report, exit code) from the sweeps
            result, code = result
    except AssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 2
    except (SRKError, ValueError, ZeroDivisionError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = _render(command, result, args)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
