"""Command-line interface: eval, sum, verify, orbit, sample, selfcheck."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath as mp

from .errors import HyperionError
from .harness import (ORBIT_EXPECTATIONS, Report, RunConfig, parse_tolerance,
                      run_suite, scalar_selfchecks)
from .identities import apply_rule
from .scalars import DEFAULT_PRECISION_BITS, ExactZero, GaussianRational
from .series import ParamPoint, SeriesSpec, eval_series
from .thomae import NAMED_SETS, orbit_report
from .varieties import ConstraintSet, sample_u1, sample_u2_rational, sample_u_general

ENV_PRECISION = "HYPERION_PRECISION_BITS"


def _default_precision() -> int:
    env = os.environ.get(ENV_PRECISION)
    return int(env) if env else DEFAULT_PRECISION_BITS


def _parse_values(text: str) -> list[GaussianRational]:
    return [GaussianRational.parse(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hyperion",
        description="verify gamma-quotient hypergeometric identities")
    ap.add_argument("--prec-bits", type=int, default=None,
                    help=f"working precision in bits (env {ENV_PRECISION}, "
                         f"default {DEFAULT_PRECISION_BITS})")
    ap.add_argument("--tol", default="2^-64",
                    help='tolerance, e.g. "2^-64" or "1e-20"')
    ap.add_argument("--max-terms", type=int, default=10 ** 6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("json", "table"), default="table")
    sub = ap.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one hypergeometric series")
    p_eval.add_argument("--alpha", required=True, help="comma-separated uppers")
    p_eval.add_argument("--beta", default="", help="comma-separated lowers")
    p_eval.add_argument("--x", required=True, help='argument, e.g. "-1" or "3/4"')

    p_sum = sub.add_parser("sum", help="apply a summation rule at a point")
    p_sum.add_argument("--rule", required=True)
    p_sum.add_argument("--point", required=True,
                       help='point as "a1,a2,..:b1,b2,.."')
    p_sum.add_argument("--x", default=None)

    p_verify = sub.add_parser("verify", help="run the verification suite")
    p_verify.add_argument("--rules", default=None,
                          help="comma-separated rule ids (default: all)")
    p_verify.add_argument("--cases", type=int, default=25)
    p_verify.add_argument("--no-orbits", action="store_true")
    p_verify.add_argument("--no-selfcheck", action="store_true")

    p_orbit = sub.add_parser("orbit", help="enumerate an orbit of a constraint set")
    p_orbit.add_argument("--label", choices=sorted(NAMED_SETS),
                         help="a built-in constraint set")
    p_orbit.add_argument("--constraints", help="JSON file with a constraint set")

    p_sample = sub.add_parser("sample", help="emit variety points")
    p_sample.add_argument("--variety", required=True,
                          help='"u:R" or "u1:R", e.g. u:2')
    p_sample.add_argument("--count", type=int, default=5)

    sub.add_parser("selfcheck", help="gamma duplication/reflection residuals")
    return ap


def cli_main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    prec = args.prec_bits if args.prec_bits else _default_precision()
    tol = parse_tolerance(args.tol)
    try:
        return _dispatch(args, prec, tol)
    except HyperionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args, prec: int, tol) -> int:
    if args.command == "eval":
        spec = SeriesSpec(ParamPoint(tuple(_parse_values(args.alpha)),
                                     tuple(_parse_values(args.beta))),
                          GaussianRational.parse(args.x))
        res = eval_series(spec, prec, tol, args.max_terms)
        if args.format == "json":
            print(json.dumps(res.to_json()))
        else:
            print(res.value.to_decimal_string())
        return 0

    if args.command == "sum":
        point = ParamPoint.parse(args.point)
        x = GaussianRational.parse(args.x) if args.x else None
        applied = apply_rule(args.rule, point, x, precision_bits=prec)
        if isinstance(applied.rhs_value, ExactZero):
            print("0")
        elif applied.gamma_quotient is None or \
                not applied.gamma_quotient.cancel().numerator_args \
                and not applied.gamma_quotient.cancel().denominator_args:
            pref = applied.prefactor
            print(pref if pref.is_real() else str(pref))
        else:
            print(applied.rhs_value.to_decimal_string())
        return 0

    if args.command == "verify":
        rules = tuple(args.rules.split(",")) if args.rules else None
        config = RunConfig(precision_bits=prec, tol=args.tol,
                           max_terms=args.max_terms, seed=args.seed,
                           rules=rules, cases_per_rule=args.cases,
                           check_orbits=not args.no_orbits,
                           check_scalars=not args.no_selfcheck)
        report = run_suite(config)
        if args.format == "json":
            print(json.dumps(report.to_json(), sort_keys=True))
        else:
            print(report.table())
        return 0 if report.summary()["fail"] == 0 else 1

    if args.command == "orbit":
        if args.label:
            cs = NAMED_SETS[args.label]()
            label = args.label
        elif args.constraints:
            with open(args.constraints) as fh:
                cs = ConstraintSet.from_json(json.load(fh))
            label = cs.label or args.constraints
        else:
            print("orbit needs --label or --constraints", file=sys.stderr)
            return 2
        rep = orbit_report(label, cs)
        if args.format == "json":
            print(json.dumps(rep, sort_keys=True))
        else:
            print(f"label={rep['input_label']} class_count={rep['class_count']}")
        expected = ORBIT_EXPECTATIONS.get(label)
        return 0 if expected in (None, rep["class_count"]) else 1

    if args.command == "sample":
        kind, _, r_text = args.variety.partition(":")
        r = int(r_text or "2")
        for i in range(args.count):
            seed = args.seed + i
            if kind == "u":
                vp = sample_u2_rational(seed) if r == 2 else \
                    sample_u_general(r, seed, prec)
            elif kind == "u1":
                vp = sample_u1(r, seed, prec)
            else:
                print(f"unknown variety kind {kind!r}", file=sys.stderr)
                return 2
            print(json.dumps(vp.to_json(), sort_keys=True))
        return 0

    if args.command == "selfcheck":
        residuals = scalar_selfchecks(prec, args.seed)
        bound = mp.mpf(2) ** (16 - prec)
        ok = all(mp.mpf(v) < bound for v in residuals.values())
        if args.format == "json":
            print(json.dumps({"residuals": residuals, "bound": mp.nstr(bound, 5),
                              "pass": ok}))
        else:
            for k, v in residuals.items():
                print(f"{k}: {v} (bound {mp.nstr(bound, 5)})")
        return 0 if ok else 1

    return 2


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
