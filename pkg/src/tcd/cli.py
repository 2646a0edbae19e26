"""Command-line front end: ``tcd check|eval|colorings|knotgroup|axioms``.

Exit status is 0 on success, 1 for evaluation errors (and failed laws) and 2
for parse or type errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dsl
from .errors import (
    BadPermutation,
    InterfaceMismatch,
    NotAGroup,
    TcdError,
    TcdSyntaxError,
    UnknownName,
    WidthMismatch,
)
from .groups import make_group

EXIT_OK, EXIT_EVAL, EXIT_PARSE = 0, 1, 2
_PARSE_ERRORS = (TcdSyntaxError, UnknownName, InterfaceMismatch, BadPermutation, WidthMismatch,
                 NotAGroup)


def build_parser():
    p = argparse.ArgumentParser(prog="tcd", description="Evaluate tangled circuit diagrams.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="parse and typecheck a program")
    c.add_argument("file")

    e = sub.add_parser("eval", help="evaluate one diagram in a backend")
    e.add_argument("file")
    e.add_argument("--backend", choices=("trel", "linres"), required=True)
    e.add_argument("--bindings", required=True)
    e.add_argument("--diagram", default=None)

    k = sub.add_parser("colorings", help="count colorings of a closed tangle")
    k.add_argument("file")
    k.add_argument("--group", required=True)
    k.add_argument("--diagram", default=None)

    g = sub.add_parser("knotgroup", help="knot group presentation of a closed tangle")
    g.add_argument("file")
    g.add_argument("--simplify", action="store_true")
    g.add_argument("--hom-count", metavar="GROUP", default=None)
    g.add_argument("--diagram", default=None)

    a = sub.add_parser("axioms", help="check the braided Frobenius laws in Tr_G")
    a.add_argument("--group", required=True)
    a.add_argument("--max-width", type=int, default=2)

    for sp in (c, e, k, g, a):
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    return p


def pick_diagram(prog, name):
    if name is not None:
        return name, prog.diagram(name)
    if "main" in prog.diagrams:
        return "main", prog.diagrams["main"]
    if len(prog.diagrams) == 1:
        return next(iter(prog.diagrams.items()))
    err = UnknownName("main", "diagram")
    err.args = (f"{err}; choose one with --diagram ({', '.join(prog.diagrams) or 'none declared'})",)
    raise err


def _emit(out, args, text, doc):
    if args.json:
        out.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def cmd_check(args, out):
    prog = dsl.load_program(args.file)
    lines, doc = [], {"diagrams": {}}
    for name, iface in prog.interfaces.items():
        lines.append(f"{name} : {iface}")
        doc["diagrams"][name] = {"dom": list(iface.dom), "cod": list(iface.cod)}
    _emit(out, args, "\n".join(lines) or "(no diagrams)", doc)
    return EXIT_OK


def cmd_eval(args, out):
    prog = dsl.load_program(args.file)
    name, term = pick_diagram(prog, args.diagram)
    bindings = dsl.load_bindings(args.backend, args.bindings, prog)
    if args.backend == "trel":
        from .trel import eval_trel, relation_to_json, render_relation, scalar_of

        r = eval_trel(term, prog.multigraph, bindings)
        doc = relation_to_json(r)
        doc["diagram"] = name
        text = render_relation(r) or "(empty relation)"
        if r.in_width == 0 and r.out_width == 0:
            text = f"scalar: {scalar_of(r)}"
        _emit(out, args, text, doc)
    else:
        from .linres import eval_linres, render_system, system_to_json

        s = eval_linres(term, prog.multigraph, bindings)
        doc = system_to_json(s)
        doc["diagram"] = name
        _emit(out, args, render_system(s), doc)
    return EXIT_OK


def cmd_colorings(args, out):
    from .spans import eval_colorings

    prog = dsl.load_program(args.file)
    _, term = pick_diagram(prog, args.diagram)
    n = eval_colorings(term, make_group(args.group))
    out.write(json.dumps({"count": n}) + "\n")
    return EXIT_OK


def cmd_knotgroup(args, out):
    from .knotgroup import eval_presentation, hom_count, tietze_simplify

    prog = dsl.load_program(args.file)
    _, term = pick_diagram(prog, args.diagram)
    p = eval_presentation(term)
    if args.simplify:
        p = tietze_simplify(p)
    doc = {"presentation": p.to_json()}
    text = str(p)
    if args.hom_count:
        # counting on the simplified presentation is much faster and gives the same number
        q = p if args.simplify else tietze_simplify(p)
        n = hom_count(q, make_group(args.hom_count))
        doc["hom_count"] = n
        doc["group"] = args.hom_count
        text += f"\nhom count into {args.hom_count}: {n}"
    _emit(out, args, text, doc)
    return EXIT_OK


def cmd_axioms(args, out):
    from .axioms import run_axioms

    results = run_axioms(make_group(args.group), max_width=args.max_width)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}" for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} laws hold in Tr_{args.group}")
    doc = {
        "group": args.group,
        "laws": [{"name": r.name, "passed": r.passed} for r in results],
        "failed": failed,
    }
    _emit(out, args, "\n".join(lines), doc)
    return EXIT_OK if not failed else EXIT_EVAL


COMMANDS = {
    "check": cmd_check,
    "eval": cmd_eval,
    "colorings": cmd_colorings,
    "knotgroup": cmd_knotgroup,
    "axioms": cmd_axioms,
}


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except _PARSE_ERRORS as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except TcdError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_EVAL


def main():
    sys.exit(run_cli())
