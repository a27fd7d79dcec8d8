"""``asep`` command line: enumerate, zl, map, stationary, verify."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import algebra as al
from . import models as md
from . import pathcore as pc
from . import symbolic as sy
from . import transforms as tr
from .models import ModelId
from .verify import SUITES, run_suite


class LengthCapExceeded(ValueError):
    pass


class UnsupportedMap(ValueError):
    pass


def _max_l() -> int:
    return int(os.environ.get("ASEP_MAX_L", "8"))


def _emit(obj, out):
    out.write(json.dumps(obj, sort_keys=True) + "\n")
    out.flush()


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _assignment(text: str) -> dict:
    out = {}
    for part in text.split(","):
        name, sep, value = part.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected name=value, got {part!r}")
        out[name.strip()] = _fraction(value.strip())
    return out


def _int_list(text: str) -> list:
    return [int(x) for x in text.split(",") if x.strip()]


# --- enumerate -----------------------------------------------------------


def cmd_enumerate(args, out) -> int:
    if args.length > _max_l():
        raise LengthCapExceeded(f"L = {args.length} exceeds ASEP_MAX_L = {_max_l()}")
    paths = md.enumerate_paths(args.model, args.length)
    for w in paths:
        if args.format == "json":
            _emit(w.to_json(), out)
        else:
            out.write(f"{pc.format_word(w.path, jumps=True)}\t{w.weight}\n")
    tot = md.total_weight(paths)
    summary = {"summary": True, "model": str(args.model), "length": args.length, "count": len(paths)}
    summary["total_weight"] = str(tot)
    try:
        summary["canonical"] = str(sy.canonicalize(tot))
    except sy.OddKappaDegree:
        pass
    if args.format == "json":
        _emit(summary, out)
    else:
        out.write(f"# count {len(paths)}\n# total {summary['total_weight']}\n")
    return 0


# --- zl ----------------------------------------------------------------------


def z_for(rep: str, L: int, canonical: bool = True) -> sy.Polynomial:
    if rep in ("1", "2", "3"):
        return al.z_transfer(int(rep), L, canonical=canonical)
    model = {"4": ModelId.R4, "enum1": ModelId.R1, "enum3": ModelId.R3}[rep]
    tot = md.total_weight(md.enumerate_paths(model, L))
    return sy.canonicalize(tot) if canonical else tot


def cmd_zl(args, out) -> int:
    if args.L > _max_l() and args.rep in ("2", "4", "enum1", "enum3"):
        raise LengthCapExceeded(f"L = {args.L} exceeds ASEP_MAX_L = {_max_l()}")
    z = z_for(args.rep, args.L, canonical=not args.raw)
    if args.eval is not None:
        out.write(f"{sy.evaluate(z, args.eval)}\n")
    else:
        out.write(sy.to_text(z) + "\n")
    return 0


# --- map -----------------------------------------------------------------------


def _build_input(model: ModelId, args) -> pc.LabeledPath:
    text = args.path.strip()
    if text.startswith("{"):
        return pc.LabeledPath.from_json(json.loads(text))
    p = pc.parse_word(text)
    if model is ModelId.R1:
        return md.label_r1(p)
    if model in (ModelId.R1_1, ModelId.R4):
        if args.mark is None:
            raise md.InvalidPath(f"{model} paths need --mark")
        return (md.label_r1_1 if model is ModelId.R1_1 else md.label_r4)(p, args.mark)
    if model is ModelId.R2_1:
        return md.label_r2_1(p, args.negative)
    if model is ModelId.R2_2:
        return md.label_r2_2(p)
    if model in (ModelId.R2_3, ModelId.R2_4):
        if args.divider is None:
            raise md.InvalidPath(f"{model} paths need --divider")
        if model is ModelId.R2_3:
            return md.label_r2_3(p, args.divider)
        return md.label_r2_4(p, args.divider, args.c_marks, args.d_marks)
    if model is ModelId.R3:
        return md.label_r3(p)
    if model is ModelId.R3_prime:
        return md.label_r3_prime(p)
    raise md.InvalidPath(f"{model} paths carry labels that a word cannot express; pass JSON")


def _compose(*fns):
    def run(w):
        for f in fns:
            w = f(w)
        return w

    return run


MAPS = {
    (ModelId.R1, ModelId.R1_1): tr.gamma,
    (ModelId.R1_1, ModelId.R1): tr.gamma_inverse,
    (ModelId.R1_1, ModelId.R4): tr.gamma_prime,
    (ModelId.R4, ModelId.R1_1): tr.gamma_prime_inverse,
    (ModelId.R1, ModelId.R4): tr.r1_to_r4,
    (ModelId.R4, ModelId.R1): tr.r4_to_r1,
    (ModelId.R2_1, ModelId.R2_1): tr.phi2_12,
    (ModelId.R2_2, ModelId.R2_3): tr.gamma_23,
    (ModelId.R2_3, ModelId.R2_2): tr.gamma_23_inverse,
    (ModelId.R2_3, ModelId.R2_4): tr.gamma_34,
    (ModelId.R2_4, ModelId.R2_3): tr.gamma_34_inverse,
    (ModelId.R2_2, ModelId.R2_4): _compose(tr.gamma_23, tr.gamma_34),
    (ModelId.R2_4, ModelId.R2_2): _compose(tr.gamma_34_inverse, tr.gamma_23_inverse),
    (ModelId.R2_5, ModelId.R2_5): tr.phi2_56,
    (ModelId.R2_5, ModelId.R4): tr.r2_5_fixed_to_r4,
    (ModelId.R3, ModelId.R3_prime): md.reweight_r3,
    (ModelId.R3_2, ModelId.R3_2): tr.phi3,
    (ModelId.R3_2, ModelId.R4): tr.r3_fixed_to_r4,
}


def cmd_map(args, out) -> int:
    key = (args.source, args.target)
    if key not in MAPS:
        raise UnsupportedMap(f"no map from {args.source} to {args.target}")
    w = _build_input(args.source, args)
    if not md.is_valid(args.source, w):
        raise md.InvalidPath(f"not a valid {args.source} path")
    image = MAPS[key](w)
    _emit(image.to_json(), out)
    return 0


# --- stationary ------------------------------------------------------------------


def cmd_stationary(args, out) -> int:
    spec = al.ChainSpec(args.L, args.alpha, args.beta)
    dist = al.stationary_exact(spec)
    mpa = al.mpa_distribution(spec) if args.check_mpa else None
    ok = True
    for tau, p in dist.items():
        rec = {"tau": list(tau), "probability_num": p.numerator, "probability_den": p.denominator}
        if mpa is not None:
            rec["mpa_match"] = mpa[tau] == p
            ok &= rec["mpa_match"]
        _emit(rec, out)
    if mpa is not None:
        _emit({"summary": True, "mpa_match": ok}, out)
        return 0 if ok else 1
    return 0


# --- verify ------------------------------------------------------------------------


def cmd_verify(args, out) -> int:
    results = run_suite(args.suite, args.L)
    failed = 0
    for r in results:
        if args.format == "json":
            _emit({"suite": r.suite, "check": r.name, "passed": r.passed, "detail": r.detail}, out)
        else:
            out.write(r.line() + "\n")
        failed += not r.passed
    if args.format != "json":
        out.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return 1 if failed else 0


# --- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="asep", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    models = [m.value for m in ModelId]

    p = sub.add_parser("enumerate", help="list every path of a model")
    p.add_argument("--model", required=True, type=ModelId, choices=list(ModelId), metavar="{" + ",".join(models) + "}")
    p.add_argument("--length", required=True, type=int)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("zl", help="the normalisation Z_L")
    p.add_argument("--rep", required=True, choices=("1", "2", "3", "4", "enum1", "enum3"))
    p.add_argument("--L", required=True, type=int)
    p.add_argument("--eval", type=_assignment, help="abar=p/q,bbar=p/q")
    p.add_argument("--raw", action="store_true", help="skip the reduction to {abar, bbar}")
    p.set_defaults(func=cmd_zl)

    p = sub.add_parser("map", help="apply a bijection or involution to one path")
    p.add_argument("--from", dest="source", required=True, type=ModelId, choices=list(ModelId), metavar="MODEL")
    p.add_argument("--to", dest="target", required=True, type=ModelId, choices=list(ModelId), metavar="MODEL")
    p.add_argument("--path", required=True, help="path word or LabeledPath JSON")
    p.add_argument("--mark", type=int)
    p.add_argument("--divider", type=int)
    p.add_argument("--c-marks", type=_int_list, default=[])
    p.add_argument("--d-marks", type=_int_list, default=[])
    p.add_argument("--negative", action="store_true", help="R2_1: the -1 copy")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("stationary", help="exact stationary distribution of the chain")
    p.add_argument("--L", required=True, type=int)
    p.add_argument("--alpha", required=True, type=_fraction)
    p.add_argument("--beta", required=True, type=_fraction)
    p.add_argument("--check-mpa", action="store_true")
    p.set_defaults(func=cmd_stationary)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", required=True, choices=(*SUITES, "all"))
    p.add_argument("--L", required=True, type=int)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (ValueError, KeyError, ArithmeticError) as exc:
        err.write(f"{type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
