"""Command-line interface.

Scenario commands: ``autfn parse FILE``, ``autfn run FILE [--json]``,
``autfn replay [DIR] [--json] [--include-large]``, ``autfn lint [DIR]``.
Ad-hoc computation commands work on expressions in the scenario syntax at an
explicit rank: compose, apply, order, inner, abelianize, det, realize,
closure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import modgroups
from .endos import is_inner, order as endo_order
from .matrices import abelianize, det as int_det, mod_reduce
from .runner import Evaluator, lint_scenarios, replay_all, run_scenario
from .scenario import ParseError, parse_scenario
from .words import format_word


def _load_scenario(path: str):
    text = Path(path).read_text()
    return parse_scenario(text, name=Path(path).stem)


def _parse_expr(rank: int, expr: str):
    scenario = parse_scenario(f"rank {rank}\naut main__ = {expr}")
    ev = Evaluator(scenario)
    for stmt in scenario.statements:
        ev.exec_statement(stmt, "")
    return ev, ev.auts["main__"]


def _parse_word_arg(ev: Evaluator, text: str):
    from .scenario import Parser

    parser = Parser(f"rank {ev.rank}\nword main__ = {text}")
    scen = parser.parse()
    ev2 = Evaluator(scen)
    for stmt in scen.statements:
        ev2.exec_statement(stmt, "")
    return ev2.words["main__"]


def cmd_parse(args: argparse.Namespace) -> int:
    try:
        scenario = _load_scenario(args.file)
    except ParseError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 1
    asserts = sum(1 for s in scenario.statements if type(s).__name__ in ("Assertion", "CheckStmt"))
    print(f"{scenario.name}: rank {scenario.rank}, {len(scenario.statements)} statements, "
          f"{asserts} assertions")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    try:
        scenario = _load_scenario(args.file)
    except ParseError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 1
    report = run_scenario(scenario, include_large=args.include_large)
    print(report.to_json() if args.json else report.human())
    return 0 if report.ok() else 1


def cmd_replay(args: argparse.Namespace) -> int:
    report = replay_all(args.dir, include_large=args.include_large)
    print(report.to_json() if args.json else report.human())
    return 0 if report.ok() else 1


def cmd_lint(args: argparse.Namespace) -> int:
    problems = lint_scenarios(args.dir)
    for p in problems:
        print(p)
    if not problems:
        print("all scenario files carry known anchors")
    return 0 if not problems else 1


def cmd_compose(args: argparse.Namespace) -> int:
    _, endo = _parse_expr(args.rank, args.expr)
    print(endo)
    return 0


def cmd_apply(args: argparse.Namespace) -> int:
    ev, endo = _parse_expr(args.rank, args.expr)
    word = _parse_word_arg(ev, args.word)
    print(format_word(endo.apply(word)))
    return 0


def cmd_order(args: argparse.Namespace) -> int:
    _, endo = _parse_expr(args.rank, args.expr)
    result = endo_order(endo, max_power=args.cap_power, max_word_len=args.cap_len)
    print("unbounded (cap reached)" if result is None else result)
    return 0


def cmd_inner(args: argparse.Namespace) -> int:
    _, endo = _parse_expr(args.rank, args.expr)
    witness = is_inner(endo)
    if witness is None:
        print("not inner")
        return 1
    print(f"inner; conjugator {format_word(witness)}")
    return 0


def cmd_abelianize(args: argparse.Namespace) -> int:
    _, endo = _parse_expr(args.rank, args.expr)
    matrix = abelianize(endo)
    if args.mod:
        print(mod_reduce(matrix, args.mod))
    else:
        print(matrix)
    return 0


def cmd_det(args: argparse.Namespace) -> int:
    _, endo = _parse_expr(args.rank, args.expr)
    value = int_det(abelianize(endo))
    if args.mod:
        print(f"{value} (mod {args.mod}: {value % args.mod})")
    else:
        print(value)
    return 0


def cmd_realize(args: argparse.Namespace) -> int:
    """Evaluate a scenario file's definitions, then print one induced action."""
    expr = f"induced {args.gaut} "
    expr += f"at {args.at}" if args.at else f"delta {args.delta}"
    if args.basis:
        expr += f" basis {args.basis}"
    try:
        source = Path(args.file).read_text() + f"\naut realized__ = {expr}\n"
        scenario = parse_scenario(source, name=Path(args.file).stem)
    except ParseError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 1
    ev = Evaluator(scenario)
    for stmt in scenario.statements:
        if type(stmt).__name__ in ("Assertion", "CheckStmt"):
            continue
        ev.exec_statement(stmt, "")
    print(ev.auts["realized__"])
    return 0


def cmd_closure(args: argparse.Namespace) -> int:
    """Normal closure of an elementary-matrix power; JSON verdict."""
    start = time.perf_counter()
    group = modgroups.sl_group(args.n, args.mod)
    seed = modgroups.elementary_mat(args.k, args.r, args.power, args.n, args.mod)
    closure = modgroups.normal_closure([seed], group)
    elapsed_ms = int((time.perf_counter() - start) * 1000)
    payload = {
        "op": "closure",
        "n": args.n,
        "modulus": args.mod,
        "order": closure.order,
        "result": f"closure of elementary({args.k},{args.r})^{args.power} "
                  f"has order {closure.order} in a group of order {group.order}",
        "elapsed_ms": elapsed_ms,
    }
    print(json.dumps(payload))
    return 0


def main(argv: "list[str] | None" = None) -> int:
    parser = argparse.ArgumentParser(prog="autfn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a scenario file and report a summary")
    p.add_argument("file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("run", help="run one scenario file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--include-large", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("replay", help="replay a scenario corpus (default: bundled)")
    p.add_argument("dir", nargs="?", default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--include-large", action="store_true")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("lint", help="check anchors in a corpus (default: bundled)")
    p.add_argument("dir", nargs="?", default=None)
    p.set_defaults(func=cmd_lint)

    for name, fn in (("compose", cmd_compose), ("order", cmd_order), ("inner", cmd_inner)):
        p = sub.add_parser(name)
        p.add_argument("expr", help="automorphism expression, e.g. 'L(1,2) * P(2,3)^-1'")
        p.add_argument("--rank", type=int, required=True)
        if name == "order":
            p.add_argument("--cap-power", type=int, default=256)
            p.add_argument("--cap-len", type=int, default=4096)
        p.set_defaults(func=fn)

    p = sub.add_parser("apply")
    p.add_argument("expr")
    p.add_argument("word", help="word literal, e.g. 'x1 x2^-1'")
    p.add_argument("--rank", type=int, required=True)
    p.set_defaults(func=cmd_apply)

    for name, fn in (("abelianize", cmd_abelianize), ("det", cmd_det)):
        p = sub.add_parser(name)
        p.add_argument("expr")
        p.add_argument("--rank", type=int, required=True)
        p.add_argument("--mod", type=int, default=0)
        p.set_defaults(func=fn)

    p = sub.add_parser("realize", help="print the action induced by a graph automorphism")
    p.add_argument("file", help="scenario file defining the graph and automorphism")
    p.add_argument("--gaut", required=True)
    p.add_argument("--at", default=None, help="basepoint vertex (basepoint-fixing case)")
    p.add_argument("--delta", default=None, help="connecting edge path")
    p.add_argument("--basis", default=None)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("closure", help="normal closure of an elementary power (JSON)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--power", type=int, required=True)
    p.set_defaults(func=cmd_closure)

    args = parser.parse_args(argv)
    if getattr(args, "at", None) is None and getattr(args, "delta", "x") is None:
        parser.error("realize needs --at or --delta")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
