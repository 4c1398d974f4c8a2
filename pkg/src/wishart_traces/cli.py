"""Command line interface.

Exit status: 0 success, 1 computation error, 2 usage error (bad flags,
expressions or config), 3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from numbers import Number

import numpy as np

from .asymptotics import MomentSequence, clt_covariance, limit_mean
from .coloring import DEFAULT_ENUM_CAP, Coloring, EnumerationLimitError
from .config import ConfigError, RunConfig, load_config
from .cumulants import StarsSpec, cumulant_from_moments, cumulant_hypermap
from .moments import moment_numeric, moment_symbolic
from .montecarlo import estimate_moment
from .parser import ParseError, parse_expression, parse_word
from .verify import BATTERIES, verify
from .words import evaluate

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _num(x) -> str:
    if isinstance(x, float) and not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (Number, str, bool, type(None))) and not isinstance(v, complex) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent, _level + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], indent, _level)
    if isinstance(obj, (float, Fraction, np.floating)):
        return _num(float(obj))
    return json.dumps(str(obj))


def _number(text: str):
    try:
        return Fraction(text)
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None


def _numbers(text: str) -> tuple:
    return tuple(_number(x) for x in text.split(",") if x.strip())


def _exact(x):
    """Fraction with denominator 1 becomes int; others stay Fraction."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _real(x):
    """Exact or float scalar as a float (complex stays complex) for stable JSON types."""
    return x if isinstance(x, complex) else float(x)


def _text(x) -> str:
    if isinstance(x, complex):
        if x.imag == 0:
            return _num(x.real)
        return f"{_num(x.real)}{'+' if x.imag >= 0 else '-'}{_num(abs(x.imag))}i"
    if isinstance(x, (Fraction, float)):
        return _num(float(x))
    return str(x)


def _config(args) -> RunConfig:
    return load_config(args.config) if args.config else RunConfig()


def _require_config(args) -> RunConfig:
    if not args.config:
        raise UsageError("this command needs --config with the model")
    return _config(args)


def cmd_moment(args):
    ast = parse_expression(args.expr)
    spec = ast.to_spec()
    out = {"command": "moment", "expr": str(ast), "sigma": str(spec.sigma), "t": list(spec.t.colors)}
    if args.numeric:
        cfg = _require_config(args)
        value = moment_numeric(spec, cfg.model(), cfg.h, args.enum_cap, args.workers)
        out["value"] = value
        text = _text(value)
    else:
        e = moment_symbolic(spec, args.enum_cap, args.workers)
        out["symbolic"] = str(e)
        out["terms"] = e.to_dict()["terms"]
        text = str(e)
    return out, text


def _stars(args) -> StarsSpec:
    words = [parse_word(w) for w in args.word]
    k = _numbers(args.k) if args.k else (1,) * len(words)
    if any(Fraction(x).denominator != 1 for x in k):
        raise UsageError("--k must be integers")
    try:
        return StarsSpec(tuple(words), tuple(int(x) for x in k))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_cumulant(args):
    spec = _stars(args)
    out = {"command": "cumulant", "words": [list(q) for q in spec.monomials], "k": list(spec.k)}
    if args.method == "moments":
        raw = cumulant_from_moments(spec)
        graded = None
    else:
        graded = cumulant_hypermap(spec, args.enum_cap)
        raw = graded.to_raw()
        out["genus_expansion"] = graded.to_dict()
    out["raw"] = str(raw)
    if args.numeric:
        cfg = _require_config(args)
        model = cfg.model()
        value = evaluate(raw, model.matrices(), model.symbol_values())
        out["value"] = value
        return out, _text(value)
    text = str(raw) if graded is None else f"{raw}\ngenus expansion: {graded}"
    return out, text


def _lam_m(args, degree: int):
    cfg = _config(args)
    if args.lam is not None:
        lam = _number(args.lam)
    elif cfg.lam:
        lam = Fraction(cfg.lam[0])
    else:
        raise UsageError("give --lambda or 'lambda' in the config")
    if args.mk is not None:
        m = MomentSequence(_numbers(args.mk))
    elif cfg.m:
        m = cfg.moments()
    else:
        m = MomentSequence.ones(degree)
    return _exact(lam), MomentSequence(tuple(_exact(Fraction(x)) for x in m.values))


def cmd_limit_mean(args):
    t = Coloring(parse_word(args.word))
    lam, m = _lam_m(args, len(t))
    value = limit_mean(t, lam, m, args.enum_cap)
    out = {"command": "limit-mean", "word": list(t.colors), "lambda": _real(lam), "value": _real(value)}
    return out, _text(value)


def cmd_clt_cov(args):
    t = Coloring(parse_word(args.word))
    lam, m = _lam_m(args, 2 * len(t))
    cov = clt_covariance(t, lam, m, cap=args.enum_cap)
    out = {"command": "clt-cov", "word": list(t.colors), "lambda": _real(lam)}
    out.update({k: _real(getattr(cov, k)) for k in ("EXX", "EYY", "EXY", "EZ2", "EabsZ2", "center_coefficient")})
    text = " ".join(f"{k}={_text(out[k])}" for k in ("EXX", "EYY", "EXY"))
    return out, text


def cmd_sample(args):
    cfg = _require_config(args)
    spec = parse_expression(args.expr).to_spec()
    model = cfg.model()
    n = args.samples or 100_000
    est = estimate_moment(spec, model, cfg.h, n, args.seed, workers=args.workers)
    out = {"command": "sample", "expr": args.expr, "seed": args.seed, **est.to_dict()}
    text = f"{_text(est.mean)} +/- {_num(est.stderr)} ({est.samples} samples)"
    if args.exact:
        exact = moment_numeric(spec, model, cfg.h, args.enum_cap, args.workers)
        out["exact"] = exact
        out["z"] = est.z(exact)
        text += f"\nexact {_text(exact)}  z={est.z(exact):.3f}"
    return out, text


def cmd_verify(args):
    report = verify(args.battery, args.seed, args.samples, args.perturb, args.threshold, args.workers)
    lines = []
    for c in report["cases"]:
        exact = complex(*c["exact"])
        est = complex(*c["estimate"])
        lines.append(
            f"{'PASS' if c['pass'] else 'FAIL'}  [{c['battery']}] {c['case']}: exact {_text(exact)} "
            f"mc {_text(est)} +/- {c['stderr']:.4g} z={c['z']:.2f}"
        )
    lines.append(f"{'PASS' if report['pass'] else 'FAIL'}  {len(report['cases'])} cases")
    return report, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON model file")
    common.add_argument("--output", choices=["text", "json"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP)

    parser = argparse.ArgumentParser(prog="wishart-traces", description="Moments and cumulants of Wishart traces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moment", parents=[common], help="exact moment of a trace monomial")
    p.add_argument("--expr", required=True, help='e.g. "tr(W1 W2)^2"')
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--symbolic", action="store_true", help="polynomial in p_r (default)")
    mode.add_argument("--numeric", action="store_true", help="evaluate at the config model")
    p.set_defaults(fn=cmd_moment)

    p = sub.add_parser("cumulant", parents=[common], help="joint cumulant of traces")
    p.add_argument("--word", action="append", required=True, help='monomial, e.g. "x1 x2"; repeatable')
    p.add_argument("--k", help="multiplicities, e.g. 2,1")
    p.add_argument("--method", choices=["hypermap", "moments"], default="hypermap")
    p.add_argument("--numeric", action="store_true")
    p.set_defaults(fn=cmd_cumulant)

    for name, fn, what in (
        ("limit-mean", cmd_limit_mean, "coefficient of N in the mean"),
        ("clt-cov", cmd_clt_cov, "limiting covariance of the centered trace"),
    ):
        p = sub.add_parser(name, parents=[common], help=what)
        p.add_argument("--word", required=True)
        p.add_argument("--lambda", dest="lam", help="common ratio p/N")
        p.add_argument("--mk", help="limiting moments m_1,m_2,... (default all 1)")
        p.set_defaults(fn=fn)

    p = sub.add_parser("sample", parents=[common], help="Monte Carlo estimate of a moment")
    p.add_argument("--expr", required=True)
    p.add_argument("--exact", action="store_true", help="also print the exact value and z-score")
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("verify", parents=[common], help="exact vs Monte Carlo batteries")
    p.add_argument("--battery", choices=sorted(BATTERIES) + ["all"], default="all")
    p.add_argument("--perturb", type=float, default=0.0, help="relative perturbation of exact values")
    p.add_argument("--threshold", type=float, default=5.0)
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        out, text = args.fn(args)
    except (UsageError, ParseError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EnumerationLimitError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    print(dumps(out) if args.output == "json" else text)
    if args.command == "verify" and not out["pass"]:
        return EXIT_VERIFY
    return EXIT_OK


def run():
    sys.exit(main())
