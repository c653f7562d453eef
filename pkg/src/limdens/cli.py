"""Command-line front end.

Exit codes: 0 success, 2 usage or input error, 3 budget exceeded,
4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import acceptance
from .counting import family_mode
from .density import STRATEGIES, density_series, even_odd_limits, coprime_reference_limits
from .errors import BudgetExceeded, LimdensError
from .locality import ball, canonical_ball_code, free_vs_quotient_ball_check
from .structures import (build_abelian, build_bijective, build_constant_example, build_genbij,
                         build_two_identity_bijective, build_unary, descriptor_to_dict,
                         materialize_finite)
from .terms import (parse_identity, parse_relator, format_identity, format_relator,
                    unary_mode, bijective_mode, constant_bijective_mode)
from .variety import VarietySpec, e0_bound, gaifman_group, inverse_words
from .walk import WalkSpec, decay_rate_estimate, walk_csv, WalkError

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_VERIFY = 0, 2, 3, 4
COUNTING_MODES = ("unordered-distinct", "ordered-distinct", "ordered-with-rep")


@dataclass
class ExperimentManifest:
    """Everything needed to reproduce a density run byte for byte."""

    family: str
    sentence: str
    s_max: int
    strategy: str = "aggregate"
    k: int = 1
    counting_mode: str = "unordered-distinct"
    tolerance: float = 0.05
    window: int = 10
    seed: int = 0
    spec: dict | None = None
    params: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentManifest":
        return cls(**json.loads(text))


def _spec_from_args(args) -> VarietySpec | None:
    if getattr(args, "spec", None):
        text = args.spec
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text()
        return VarietySpec.from_json(text)
    return None


def _emit(args, name: str, text: str):
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)
    else:
        sys.stdout.write(text)


# -- classify --------------------------------------------------------------

def cmd_classify(args) -> int:
    fam = args.family or "bijective"
    if fam == "abelian":
        if not args.relator:
            raise LimdensError("abelian classification needs --relator")
        desc = build_abelian(parse_relator(args.relator))
    else:
        if not args.identity:
            raise LimdensError("classification needs --identity")
        if fam == "unary":
            sig = unary_mode().signature
            desc = build_unary(parse_identity(args.identity[0], sig))
        elif fam == "bijective":
            sig = bijective_mode().signature
            desc = build_bijective(parse_identity(args.identity[0], sig))
        elif fam == "two-id-bijective":
            sig = bijective_mode().signature
            desc = build_two_identity_bijective([parse_identity(t, sig) for t in args.identity])
        elif fam == "constant-bijective":
            sig = constant_bijective_mode().signature
            desc = build_constant_example(parse_identity(args.identity[0], sig))
        elif fam == "genbij":
            spec = _spec_from_args(args) or VarietySpec.basic_bijective()
            desc = build_genbij(parse_identity(args.identity[0], spec.signature), spec)
        else:
            raise LimdensError(f"cannot classify family {fam!r}")
    report = descriptor_to_dict(desc)
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    if args.dot:
        if desc.size is None:
            raise LimdensError("DOT output needs a finite structure")
        sys.stdout.write(materialize_finite(desc, args.budget).to_dot() + "\n")
    return EXIT_OK


# -- enumerate -------------------------------------------------------------

def cmd_enumerate(args) -> int:
    fam = args.family or "bijective"
    mode = family_mode(fam, args.n, args.m)
    lines = ["length,count,cumulative,closed_form"]
    acc = 0
    if mode.total(args.smax) > args.budget:
        raise BudgetExceeded(f"{mode.total(args.smax)} identities exceeds budget {args.budget}")
    for ell in range(args.smax + 1):
        items = list(mode.enumerate(ell))
        acc += len(items)
        lines.append(f"{ell},{len(items)},{acc},{mode.total(ell)}")
        if args.list:
            fmt = format_relator if fam == "abelian" else format_identity
            for e in items:
                lines.append("# " + fmt(e))
    _emit(args, "enumerate.csv", "\n".join(lines) + "\n")
    return EXIT_OK


# -- density ---------------------------------------------------------------

def _density_params(args):
    params = {}
    fam = args.family
    if fam == "two-id-bijective":
        params["counting_mode"] = args.mode
    if fam == "constants-like":
        params.update(n=args.n or 2, r=args.r, m=args.m)
    return params


def run_manifest(man: ExperimentManifest):
    params = dict(man.params)
    if man.spec is not None:
        params["spec"] = VarietySpec.from_json(json.dumps(man.spec))
    series = density_series(man.family, man.sentence, man.s_max, man.strategy,
                            budget=params.pop("budget", 10 ** 6), **params)
    try:
        report = even_odd_limits(series, man.window, man.tolerance).to_dict()
    except ValueError as e:
        report = {"note": str(e)}
    if man.family == "two-id-bijective" and series.sentence == "OneCycle":
        report["references"] = coprime_reference_limits()
    report["final"] = {str(s): float(series.density(s)) for s in series.s_values[-2:]}
    return series, json.dumps(report, sort_keys=True, indent=2) + "\n"


def cmd_density(args) -> int:
    if not args.family or not args.sentence or args.smax is None:
        raise LimdensError("density needs --family, --sentence and --smax")
    spec = _spec_from_args(args)
    params = _density_params(args)
    params["budget"] = args.budget
    man = ExperimentManifest(args.family, args.sentence, args.smax, args.strategy, args.k,
                             args.mode, args.tol, args.window, args.seed,
                             json.loads(spec.to_json()) if spec else None, params,
                             {"series": "series.csv", "report": "report.json"})
    series, report = run_manifest(man)
    if args.out:
        _emit(args, "series.csv", series.to_csv())
        _emit(args, "report.json", report)
        _emit(args, "manifest.json", man.to_json())
    else:
        sys.stdout.write(report)
    return EXIT_OK


# -- walk -------------------------------------------------------------------

def cmd_walk(args) -> int:
    spec = WalkSpec.parse(args.n, args.support)
    _emit(args, "walk.csv", walk_csv(spec, args.kmax))
    try:
        fit = decay_rate_estimate(spec, args.kmax)
        info = asdict(fit)
    except WalkError as e:
        info = {"fit": None, "reason": str(e)}
    sys.stderr.write(json.dumps(info, sort_keys=True) + "\n")
    return EXIT_OK


# -- gaifman ----------------------------------------------------------------

def cmd_gaifman(args) -> int:
    spec = _spec_from_args(args)
    if args.free_check:
        spec = spec or VarietySpec.basic_bijective()
        e = parse_identity(args.identity[0], spec.signature)
        res = free_vs_quotient_ball_check(spec, e, args.r, require_hypothesis=not args.force,
                                          slack=args.slack)
        out = asdict(res)
        out["mismatches"] = [[str(u), str(v)] for u, v in res.mismatches]
        sys.stdout.write(json.dumps(out, sort_keys=True) + "\n")
        return EXIT_OK
    fam = args.family or "bijective"
    if fam == "abelian":
        desc = build_abelian(parse_relator(args.relator))
    elif fam == "unary":
        desc = build_unary(parse_identity(args.identity[0], unary_mode().signature))
    else:
        desc = build_bijective(parse_identity(args.identity[0], bijective_mode().signature))
    st = materialize_finite(desc, args.budget)
    b = ball(st, args.center, args.r)
    out = {"descriptor": descriptor_to_dict(desc), "center": args.center, "r": args.r,
           "ball_size": b.size, "code": canonical_ball_code(b).decode()}
    sys.stdout.write(json.dumps(out, sort_keys=True) + "\n")
    if args.dot:
        sys.stdout.write(b.to_dot() + "\n")
    return EXIT_OK


# -- group ------------------------------------------------------------------

def cmd_group(args) -> int:
    spec = _spec_from_args(args)
    if spec is None:
        if not args.symbols:
            raise LimdensError("group needs --spec or --symbols/--relations")
        syms = [s.strip() for s in args.symbols.split(",")]
        rels = [tuple(int(v) for v in r.split(",")) for r in (args.relations or "").split(";") if r.strip()]
        spec = VarietySpec.genbij(syms, rels)
    g = gaifman_group(spec)
    out = g.to_dict()
    if g.pi1 is not None:
        out["e0"] = e0_bound(g).e0
    try:
        out["inverse_words"] = {k: list(v) for k, v in inverse_words(spec).items()}
    except LimdensError as e:
        out["inverse_words"] = None
        out["inverse_error"] = str(e)
    sys.stdout.write(json.dumps(out, sort_keys=True) + "\n")
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.manifest:
        path = Path(args.manifest)
        man = ExperimentManifest.from_json(path.read_text())
        series, report = run_manifest(man)
        ok = True
        for name, fresh in (("series", series.to_csv()), ("report", report)):
            stored = path.parent / man.outputs.get(name, "")
            same = stored.is_file() and stored.read_text() == fresh
            print(f"[{'PASS' if same else 'FAIL'}] {name}: {stored}")
            ok &= same
        return EXIT_OK if ok else EXIT_VERIFY
    sel = set()
    for group in args.only or []:
        if group.isdigit():
            sel.add(int(group))
        elif group in acceptance.GROUPS:
            sel.update(acceptance.GROUPS[group])
        else:
            raise LimdensError(f"unknown group {group!r}; choose from {sorted(acceptance.GROUPS)}")
    results = acceptance.run(sel or None, echo=print)
    if args.out:
        _emit(args, "verify.json",
              json.dumps([r.to_dict() for r in results], sort_keys=True, indent=2, default=str) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family")
    common.add_argument("--smax", type=int)
    common.add_argument("--k", type=int, default=1)
    common.add_argument("--mode", choices=COUNTING_MODES, default="unordered-distinct")
    common.add_argument("--strategy", choices=STRATEGIES, default="aggregate")
    common.add_argument("--out")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=10 ** 6)
    common.add_argument("--spec", help="variety spec JSON, inline or a file path")

    p = argparse.ArgumentParser(prog="limdens", description="Limiting densities of finitely presented structures.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common])
    c.add_argument("--identity", action="append")
    c.add_argument("--relator")
    c.add_argument("--dot", action="store_true")
    c.set_defaults(func=cmd_classify)

    e = sub.add_parser("enumerate", parents=[common])
    e.add_argument("--n", type=int)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--list", action="store_true")
    e.set_defaults(func=cmd_enumerate, smax=None)

    d = sub.add_parser("density", parents=[common])
    d.add_argument("--sentence")
    d.add_argument("--tol", type=float, default=0.05)
    d.add_argument("--window", type=int, default=10)
    d.add_argument("--n", type=int)
    d.add_argument("--r", type=int, default=1)
    d.add_argument("--m", type=int, default=1)
    d.set_defaults(func=cmd_density)

    w = sub.add_parser("walk", parents=[common])
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--support", required=True)
    w.add_argument("--kmax", type=int, default=200)
    w.set_defaults(func=cmd_walk)

    g = sub.add_parser("gaifman", parents=[common])
    g.add_argument("--identity", action="append")
    g.add_argument("--relator")
    g.add_argument("--r", type=int, default=1)
    g.add_argument("--center", type=int, default=0)
    g.add_argument("--dot", action="store_true")
    g.add_argument("--free-check", action="store_true",
                   help="compare generator balls in the free structure and the quotient")
    g.add_argument("--force", action="store_true", help="run the free check even if the gap hypothesis fails")
    g.add_argument("--slack", action="store_true", help="use e0+4 in the gap threshold")
    g.set_defaults(func=cmd_gaifman)

    gr = sub.add_parser("group", parents=[common])
    gr.add_argument("--symbols")
    gr.add_argument("--relations", help='rows separated by ";", e.g. "1,1;0,2"')
    gr.set_defaults(func=cmd_group)

    v = sub.add_parser("verify", parents=[common])
    v.add_argument("--only", action="append", help="criterion number or group: " + ", ".join(acceptance.GROUPS))
    v.add_argument("--manifest")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "enumerate" and args.smax is None:
        parser.error("enumerate needs --smax")
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (LimdensError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
