"""Command-line front end.

Exit codes: 0 success, 1 check failure, 2 usage or parse error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import lab, proplogic
from .boolalg import AlgebraSizeError, BoolAlg
from .errors import BudgetExceeded
from .evaluator import EvalContext, SemanticsError, UnboundVariableError
from .folast import FormulaSyntaxError, free_vars, parse, parse_prop, render
from .twist import Semantics, TwistVal, is_designated, twist_domain
from .universe import UniverseStore, UnknownElementError, enumerate_rank

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--atoms", type=int, default=1, help="number of atoms n of 2^n")
    p.add_argument("--semantics", choices=[s.value for s in Semantics], default="lpt0")
    p.add_argument("--rank", type=int, default=3)
    p.add_argument("--budget", type=int, default=10 ** 6)
    p.add_argument("--sample", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--store", help="universe dump to load (or write, for enumerate)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="twistlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("algebra", parents=[common], help="describe 2^n and its twist domain")
    sub.add_parser("enumerate", parents=[common], help="build the universe up to --rank")
    ev = sub.add_parser("eval", parents=[common], help="evaluate a set-theoretic formula")
    ev.add_argument("-e", "--expr", required=True)
    ev.add_argument("--assign", action="append", default=[], metavar="VAR=ID")
    ta = sub.add_parser("taut", parents=[common], help="propositional tautology check")
    ta.add_argument("-e", "--expr", required=True)
    pr = sub.add_parser("prove", parents=[common], help="check a Hilbert proof script")
    pr.add_argument("file")
    su = sub.add_parser("suite", parents=[common], help="run lab checks")
    su.add_argument("names", nargs="*", metavar="name", help=f"any of: {', '.join(lab.SUITE)}")
    su.add_argument("--figures", metavar="DIR", help="also write PNG figures to DIR")
    su.add_argument("--timings", action="store_true", help="record elapsed_ms (breaks byte-identical output)")
    wi = sub.add_parser("witness", parents=[common], help="print a named witness construction")
    wi.add_argument("name", choices=list(lab.WITNESSES))
    return parser


def _config(args) -> lab.LabConfig:
    return lab.LabConfig(atoms=args.atoms, semantics=Semantics(args.semantics), rank=args.rank,
                         budget=args.budget, sample=args.sample, seed=args.seed)


def _emit(args, obj, text: Optional[str] = None):
    if args.format == "json":
        print(json.dumps(obj, sort_keys=True, ensure_ascii=False))
    else:
        print(text if text is not None else _as_text(obj))


def _as_text(obj, indent: str = "") -> str:
    if isinstance(obj, dict):
        if set(obj) == {"z1", "z2", "sym"}:
            return _tv_text(obj)
        lines = []
        for k, v in obj.items():
            if isinstance(v, dict) and v and set(v) != {"z1", "z2", "sym"}:
                lines.append(f"{indent}{k}:")
                lines.append(_as_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_as_text(v) if isinstance(v, dict) and v else v}")
        return "\n".join(lines)
    return f"{indent}{obj}"


def _tv_text(d: dict) -> str:
    return f"({d['z1']:#x},{d['z2']:#x})" + (f" = {d['sym']}" if d["sym"] else "")


def _value_json(x) -> object:
    if isinstance(x, TwistVal):
        return lab.tv_json(x)
    if isinstance(x, Fraction):
        return str(x)
    return x


def cmd_algebra(args) -> int:
    alg = BoolAlg(args.atoms)
    dom = twist_domain(alg)
    obj = {"atoms": alg.n, "algebra_size": alg.size, "twist_domain_size": len(dom),
           "designated_count": sum(is_designated(x) for x in dom)}
    if alg.size <= 256:
        obj["carrier"] = list(range(alg.size))
        obj["designated"] = [[x.z1, x.z2] for x in dom if is_designated(x)]
    _emit(args, obj)
    return EXIT_OK


def _universe(args) -> tuple[UniverseStore, list[int]]:
    if args.store and os.path.exists(args.store):
        with open(args.store) as fh:
            store = UniverseStore.load(fh)
        if store.alg.n != args.atoms:
            raise UsageError(f"store is over 2^{store.alg.n}, --atoms is {args.atoms}")
        return store, list(store.ids())
    store = UniverseStore(BoolAlg(args.atoms))
    return store, enumerate_rank(store, args.rank, args.budget)


def cmd_enumerate(args) -> int:
    store = UniverseStore(BoolAlg(args.atoms))
    elems = enumerate_rank(store, args.rank, args.budget)
    if args.store:
        with open(args.store, "w") as fh:
            store.dump(fh)
        _emit(args, {"atoms": args.atoms, "rank": args.rank, "elements": len(elems), "store": args.store})
    else:
        sys.stdout.write(store.dumps())
    return EXIT_OK


def cmd_eval(args) -> int:
    f = parse(args.expr)
    store, carrier = _universe(args)
    ctx = EvalContext(store, args.semantics, carrier)
    mu = {}
    for item in args.assign:
        name, _, val = item.partition("=")
        if not name or not val.isdigit():
            raise UsageError(f"bad assignment {item!r}, expected VAR=ID")
        mu[name] = int(val)
    obj = {"formula": render(f), "atoms": args.atoms, "semantics": args.semantics,
           "carrier_size": len(carrier)}
    missing = free_vars(f) - mu.keys()
    if missing and mu:
        raise UnboundVariableError(f"unbound variables {sorted(missing)}")
    if missing:
        # An open formula with no assignment: validity under every assignment into the carrier.
        obj["valid_all"] = ctx.is_valid_all(f, args.budget)
        _emit(args, obj)
        return EXIT_OK
    val = ctx.val_formula(f, mu)
    obj.update(assignment=mu, value=lab.tv_json(val), designated=is_designated(val))
    _emit(args, obj)
    return EXIT_OK


def cmd_taut(args) -> int:
    f = parse_prop(args.expr)
    matrix = proplogic.MPT0 if args.atoms == 1 else proplogic.TwistMatrix(BoolAlg(args.atoms))
    verdict = proplogic.is_tautology(f, matrix, args.budget)
    obj = {"formula": render(f), "matrix": matrix.name, "tautology": verdict.holds,
           "checked": verdict.checked}
    if verdict.countervaluation is not None:
        obj["countervaluation"] = {k: _value_json(v) for k, v in verdict.countervaluation.items()}
    _emit(args, obj)
    return EXIT_OK


def cmd_prove(args) -> int:
    try:
        with open(args.file) as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(str(e)) from None
    script = proplogic.parse_proof(text)
    verdict = proplogic.check_proof(script)
    obj = {"file": args.file, "lines": len(script.lines), "ok": verdict.ok}
    if not verdict.ok:
        obj.update(first_bad_line=verdict.first_bad_line, reason=verdict.reason)
    if script.lines:
        obj["conclusion"] = render(script.lines[-1].formula)
    _emit(args, obj)
    return EXIT_OK if verdict.ok else EXIT_FAIL


def _emit_reports(args, reports) -> int:
    for r in reports:
        if args.format == "json":
            print(r.to_json())
        else:
            print(f"{r.check:<18} {r.verdict:<8} {json.dumps(r.params, sort_keys=True)}")
    return EXIT_FAIL if any(not r.passed for r in reports) else EXIT_OK


def cmd_suite(args) -> int:
    unknown = [n for n in args.names if n not in lab.SUITE]
    if unknown:
        raise UsageError(f"unknown checks: {', '.join(unknown)}")
    cfg = _config(args)
    reports = lab.run_suite(args.names, cfg, timings=args.timings)
    code = _emit_reports(args, reports)
    if args.figures:
        from .report import render_figures
        for path in render_figures(reports, cfg, args.figures):
            print(f"# figure {path}", file=sys.stderr)
    return code


def cmd_witness(args) -> int:
    return _emit_reports(args, lab.WITNESSES[args.name](_config(args)))


COMMANDS = {"algebra": cmd_algebra, "enumerate": cmd_enumerate, "eval": cmd_eval, "taut": cmd_taut,
            "prove": cmd_prove, "suite": cmd_suite, "witness": cmd_witness}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except BudgetExceeded as e:
        print(f"error: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except FormulaSyntaxError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, proplogic.ProofScriptError, UnboundVariableError, UnknownElementError,
            SemanticsError, AlgebraSizeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
