"""Command-line front end: ``ilfmp <command> ...``.

Exit codes: 0 success, 1 domain failure (a precondition fails, a frame is
outside the requested class, a countermodel exists under --expect-valid),
2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import constructions as cons
from . import decision
from . import formula as fm
from . import simplified as simp
from . import veltman as velt
from .errors import BoundError, FormulaSyntaxError, PreconditionError, UnknownWorld

LOGIC_NAMES = [str(x) for x in simp.LogicId]


class UsageError(Exception):
    pass


def _formula(text: str) -> fm.Formula:
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read formula file: {exc}") from exc
    return fm.parse(text.strip())


def _load(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read model file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _kind(obj: dict, requested: str | None) -> str:
    if requested:
        return requested
    return "veltman" if isinstance(obj.get("S"), dict) else "simplified"


def _model(obj: dict, kind: str):
    return velt.from_json(obj) if kind == "veltman" else simp.from_json(obj)


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=2) if args.json else text)


# ---------------------------------------------------------------- commands


def cmd_parse(args) -> int:
    f = _formula(args.formula)
    _emit(args, fm.to_json(f), fm.to_text(f, unicode=args.unicode))
    return 0


def cmd_eval(args) -> int:
    obj = _load(args.model)
    kind = _kind(obj, args.kind)
    m = _model(obj, kind)
    f = _formula(args.formula)
    if kind == "veltman":
        value = velt.forces(m, args.world, f)
    elif args.semantics == "alternative":
        value = simp.s_forces_alt(m, args.world, f)
    else:
        value = simp.s_forces(m, args.world, f)
    _emit(args, {"world": args.world, "formula": fm.to_text(f), "forces": value},
          f"{args.world} {'forces' if value else 'does not force'} {fm.to_text(f)}")
    return 0


def cmd_check_frame(args) -> int:
    obj = _load(args.model)
    kind = _kind(obj, args.kind)
    m = _model(obj, kind)
    report = velt.validate_frame(m) if kind == "veltman" else simp.validate_frame(m)
    conds = [c for c in (args.conditions or "").split(",") if c]
    results = {}
    if report.ok:
        check = velt.check_condition if kind == "veltman" else simp.s_check_condition
        results = {c: check(m.frame, c) for c in conds}
    ok = report.ok and all(results.values())
    lines = [f"{kind} frame: {'valid' if report.ok else 'invalid'}"]
    lines += [f"  {v}" for v in report.violations]
    lines += [f"  {c}: {'holds' if v else 'fails'}" for c, v in results.items()]
    _emit(args, {"kind": kind, "valid": report.ok, "violations": report.violations,
                 "conditions": results}, "\n".join(lines))
    return 0 if ok else 1


def cmd_classify(args) -> int:
    m = simp.from_json(_load(args.model))
    report = simp.validate_frame(m)
    member = report.ok and simp.classify(m.frame, args.logic)
    _emit(args, {"logic": args.logic, "member": member, "violations": report.violations},
          f"{'is' if member else 'is not'} a simplified {args.logic}-frame")
    return 0 if member else 1


def cmd_transform(args) -> int:
    obj = _load(args.model)
    extra = {}
    if args.construction in ("sv", "sv2", "svil"):
        base = velt.from_json(obj)
        if args.construction == "sv":
            out = cons.construct_sv(base, args.logic)
        elif args.construction == "sv2":
            out = cons.construct_sv2(base, args.logic)
        else:
            if args.logic not in (None, str(simp.LogicId.ILminus_J2plusJ5)):
                raise PreconditionError("the svil construction is for ILminus_J2plusJ5 only")
            res = cons.construct_svil(base, args.depth)
            out = res.fragment
            extra = {"depth_bound": res.depth_bound}
    else:
        if args.formula is None:
            raise UsageError("the cex construction needs --formula")
        m = simp.from_json(obj)
        if args.world:
            m = cons.generated_submodel(m, args.world)
        out = cons.reduce_il(m, _formula(args.formula))
    data = simp.to_json(out)
    if args.out:
        Path(args.out).write_text(json.dumps(data, indent=2) + "\n")
    if args.dot:
        Path(args.dot).write_text(simp.to_dot(out))
    if args.json or not args.out:
        print(json.dumps({**data, **extra}, indent=2))
    else:
        print(f"wrote {len(out.worlds)}-world simplified model to {args.out}")
    return 0


def cmd_search(args) -> int:
    f = _formula(args.formula)
    res = decision.find_countermodel(f, args.logic, args.semantics, args.max_size, args.engine, args.clause)
    text = (f"{res.verdict} for {fm.to_text(f)} over {args.semantics} {args.logic}-frames "
            f"with at most {args.max_size} worlds")
    if res.witness is not None:
        m, w = res.witness
        dump = velt.to_json if args.semantics == "veltman" else simp.to_json
        text += f"\nrefuted at {w} in\n" + json.dumps(dump(m), indent=2)
    _emit(args, res.to_json(), text)
    return 1 if args.expect_valid and res.found else 0


def cmd_facts(args) -> int:
    vsize = args.veltman_size or min(args.max_size, decision.MAX_FACT_VELTMAN_SIZE)
    report = decision.check_derivability_facts(vsize, args.max_size, args.engine)
    _emit(args, report.to_json(), str(report))
    return 0 if report.ok else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ilfmp", description="Veltman and simplified Veltman semantics toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("parse", cmd_parse, "parse and pretty-print a formula")
    sp.add_argument("formula", help="formula text or @file")
    sp.add_argument("--unicode", action="store_true")

    sp = add("eval", cmd_eval, "evaluate a formula at a world")
    sp.add_argument("--model", required=True)
    sp.add_argument("--world", required=True)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--semantics", choices=simp.SEMANTICS, default="standard")
    sp.add_argument("--kind", choices=("veltman", "simplified"))

    sp = add("check-frame", cmd_check_frame, "validate a frame and test frame conditions")
    sp.add_argument("--model", required=True)
    sp.add_argument("--kind", choices=("veltman", "simplified"))
    sp.add_argument("--conditions", help="comma-separated, e.g. J1,J2plus,J5")

    sp = add("classify", cmd_classify, "test membership in a logic's simplified frame class")
    sp.add_argument("--model", required=True)
    sp.add_argument("--logic", required=True, choices=LOGIC_NAMES)

    sp = add("transform", cmd_transform, "apply a model construction")
    sp.add_argument("--model", required=True)
    sp.add_argument("--construction", required=True, choices=("sv", "sv2", "svil", "cex"))
    sp.add_argument("--logic", choices=LOGIC_NAMES)
    sp.add_argument("--depth", type=int, default=3, help="trace length bound for svil")
    sp.add_argument("--formula", help="formula refuted at the root (cex)")
    sp.add_argument("--world", help="restrict to the submodel generated by this world first (cex)")
    sp.add_argument("--out", help="write the output model JSON here")
    sp.add_argument("--dot", help="write a DOT rendering here")

    sp = add("search", cmd_search, "bounded countermodel search")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--logic", required=True, choices=list(decision.VELTMAN_LOGICS))
    sp.add_argument("--semantics", choices=("veltman", "simplified"), default="simplified")
    sp.add_argument("--max-size", type=int, default=3)
    sp.add_argument("--engine", choices=("auto", "enumerate", "sat"), default="auto")
    sp.add_argument("--clause", choices=simp.SEMANTICS, default="standard",
                    help="reading of |> on simplified frames")
    sp.add_argument("--expect-valid", action="store_true", help="exit 1 if a countermodel is found")

    sp = add("facts", cmd_facts, "semantic check of the derivability facts")
    sp.add_argument("--max-size", type=int, default=5, help="simplified frame bound")
    sp.add_argument("--veltman-size", type=int, help="Veltman frame bound (default min(max-size, 3))")
    sp.add_argument("--engine", choices=("auto", "enumerate", "sat"), default="auto")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "construction", None) in ("sv", "sv2") and not args.logic:
        parser.error("--logic is required for sv and sv2")
    try:
        return args.fn(args)
    except (FormulaSyntaxError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PreconditionError, BoundError, UnknownWorld, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
