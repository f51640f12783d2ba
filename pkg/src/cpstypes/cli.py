"""``cps`` command-line front-end.

Exit codes: 0 success, 1 semantic failure (violations, non-morphism, or a
``check`` result other than the one demanded by ``--expect``), 2 bad input.
Output is JSON unless ``--human`` is given; ``CPS_COLOR=1`` colours human
output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import jsonio
from .errors import CpsError
from .hierarchy import FIXPOINT, check_morphism_preserves_descriptions, describe, hierarchy_partition, tree_to_json
from .logic import check, parse_formula
from .measure import Report
from .quotient import is_non_redundant, quotient, terminal_approximation
from .space import LiteralSet, format_state, induce_from_propositions
from .structure import check_morphism, validate_structure


class InputError(Exception):
    pass


def _load(path):
    try:
        return jsonio.load_file(path)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except CpsError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_structure(path):
    data = _load(path)
    try:
        return jsonio.structure_from_json(data)
    except CpsError as exc:
        raise InputError(f"{path}: {exc}") from None


def _paint(text, ok):
    if os.environ.get("CPS_COLOR") != "1":
        return text
    return f"\x1b[{32 if ok else 31}m{text}\x1b[0m"


def _human_report(report: Report) -> str:
    if report.ok:
        return _paint("OK", True)
    lines = [_paint(f"FAILED ({len(report.violations)} violation(s))", False)]
    for v in report.violations:
        where = ", ".join(f"{key}={value}" for key, value in v.context)
        lines.append(f"  [{v.kind}] {where}: {v.detail}")
    return "\n".join(lines)


def cmd_validate(args, out):
    ts = _load_structure(args.structure)
    report = validate_structure(ts, harsanyi=not args.no_harsanyi)
    out.write(_human_report(report) + "\n" if args.human else jsonio.dumps(report.to_dict()))
    return 0 if report.ok else 1


def cmd_describe(args, out):
    ts = _load_structure(args.structure)
    tree = describe(ts, args.player, args.type, args.depth)
    out.write(jsonio.dumps(tree_to_json(tree)))
    return 0


def cmd_quotient(args, out):
    ts = _load_structure(args.structure)
    q, f = quotient(ts)
    payload = jsonio.structure_to_json(q)
    payload["map"] = f.to_dict()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(jsonio.dumps(payload))
        summary = {
            "input_non_redundant": is_non_redundant(ts)[0],
            "blocks": hierarchy_partition(ts, FIXPOINT).to_dict(),
        }
        out.write(jsonio.dumps(summary))
    else:
        out.write(jsonio.dumps(payload))
    return 0


def cmd_morphism(args, out):
    ts = _load_structure(args.source)
    ts2 = _load_structure(args.target)
    try:
        f = jsonio.morphism_from_json(_load(args.map))
    except CpsError as exc:
        raise InputError(f"{args.map}: {exc}") from None
    report = check_morphism(ts, ts2, f)
    desc = check_morphism_preserves_descriptions(ts, ts2, f, args.depth) if report.ok else None
    ok = report.ok and desc.ok
    if args.human:
        text = "morphism: " + _human_report(report)
        if desc is not None:
            text += f"\ndescriptions up to depth {args.depth}: " + _human_report(desc)
        out.write(text + "\n")
    else:
        payload = {"morphism": report.to_dict(), "descriptions": desc.to_dict() if desc else None}
        out.write(jsonio.dumps(payload))
    return 0 if ok else 1


def cmd_check(args, out):
    ts = _load_structure(args.structure)
    phi = parse_formula(args.formula)
    result = check(ts, phi)
    payload = {"status": result.status}
    if result.witness is not None:
        payload["witness"] = format_state(result.witness)
    if args.all:
        payload["extension"] = [format_state(ts.world.states[i]) for i in result.extension]
    if args.human:
        line = _paint(result.status, result.status != "unsatisfiable")
        if result.witness is not None:
            line += f" (e.g. at {format_state(result.witness)})"
        out.write(line + "\n")
        if args.all:
            out.write("".join(f"  {w}\n" for w in payload["extension"]))
    else:
        out.write(jsonio.dumps(payload))
    if args.expect and args.expect != result.status:
        return 1
    return 0


def cmd_induce(args, out):
    data = _load(args.props)
    try:
        props = [str(p) for p in data["propositions"]]
        conds = [LiteralSet(c) for c in data.get("conditioning", [])]
    except (KeyError, TypeError):
        raise InputError(f"{args.props}: expected {{'propositions': [...], 'conditioning': [[...], ...]}}") from None
    space, _ = induce_from_propositions(props, conds)
    out.write(jsonio.dumps(jsonio.space_to_json(space)))
    return 0


def cmd_approx(args, out):
    structures = [_load_structure(p) for p in args.structures]
    approx = terminal_approximation(structures, args.depth)
    payload = {
        "depth": args.depth,
        "counts": {j: len(entries) for j, entries in approx.items()},
        "descriptions": {j: [tree_to_json(e.description) for e in entries] for j, entries in approx.items()},
    }
    out.write(jsonio.dumps(payload))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cps", description="Finite type structures over conditional probability systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check CPS axioms and the own-type Dirac condition")
    p.add_argument("structure")
    p.add_argument("--no-harsanyi", action="store_true", help="skip the own-type Dirac condition")
    p.add_argument("--human", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("describe", help="print a depth-k description tree")
    p.add_argument("structure")
    p.add_argument("--player", required=True, help="player id, or 0 for nature")
    p.add_argument("--type", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("quotient", help="merge description-equivalent types")
    p.add_argument("structure")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("morphism", help="check a type morphism and description preservation")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("map")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--human", action="store_true")
    p.set_defaults(func=cmd_morphism)

    p = sub.add_parser("check", help="model-check a formula")
    p.add_argument("structure")
    p.add_argument("formula")
    p.add_argument("--all", action="store_true", help="also list every satisfying world")
    p.add_argument("--expect", choices=["valid", "satisfiable", "unsatisfiable"])
    p.add_argument("--human", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("induce", help="build the space induced by propositions")
    p.add_argument("props")
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("approx", help="depth-k descriptions realised across structures")
    p.add_argument("structures", nargs="+")
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=cmd_approx)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except CpsError as exc:
        err.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
