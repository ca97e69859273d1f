"""Command-line front end.

Exit codes: 0 success, 1 a check or verification failed, 2 usage or input
error.  The default depth comes from ``GRAPHPATHS_DEPTH`` (4 if unset).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import cylinders as cyl
from . import diagonal as dg
from .desing import CollapseError, check_collapsible, collapse, desingularise, iso_check
from .graph import GraphError, validate
from .graphfile import GraphSyntaxError, format_graph, parse_graph, to_dot
from .literals import (
    LiteralError,
    format_cylinder,
    format_element,
    format_path,
    parse_cylinder,
    parse_element,
    parse_path,
    parse_vertex,
)
from .pathmaps import FactorizationError
from .paths import PathError, boundary_paths, e_leq_n, paths_with_range
from .sequences import EventuallyPeriodic
from .verify import format_table, run_all

DEPTH_ENV = "GRAPHPATHS_DEPTH"


class UsageError(Exception):
    pass


def _default_depth() -> int:
    raw = os.environ.get(DEPTH_ENV)
    if raw is None:
        return 4
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{DEPTH_ENV} must be an integer, got {raw!r}") from None
    if value < 0:
        raise UsageError(f"{DEPTH_ENV} must be nonnegative")
    return value


def _load(path: str, check: bool = True):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(text, source=path, check=check)


def _write(path: Optional[str], text: str, out) -> None:
    if path is None or path == "-":
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _policy(text: Optional[str]) -> Optional[EventuallyPeriodic]:
    """``3`` (constant), or ``1,2;1`` (prefix;cycle) slot counts."""
    if text is None:
        return None
    pre_txt, sep, cyc_txt = text.partition(";")
    if not sep:
        pre_txt, cyc_txt = "", text
    try:
        pre = tuple(int(x) for x in pre_txt.split(",") if x.strip())
        cyc = tuple(int(x) for x in cyc_txt.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad policy {text!r}; expected counts like '1' or '0,2;1'") from None
    if not cyc or sum(cyc) == 0 or min(pre + cyc) < 0:
        raise UsageError("policy cycle must place at least one edge")
    return EventuallyPeriodic(pre, cyc)


def _collapse_map(g, tails):
    ids = tails if tails else [t.id for t in g.tails]
    return collapse(g, ids).map


# subcommands


def cmd_validate(args, out):
    report = validate(_load(args.file, check=False))
    print(report, file=out)
    return 0 if report.ok else 1


def cmd_paths(args, out):
    g = _load(args.file)
    v = parse_vertex(g, args.vertex)
    if args.leq:
        res = e_leq_n(g, v, args.length)
        if res is None:
            print("infinite", file=out)
            return 0
        paths, truncated = res, False
    else:
        paths, truncated = paths_with_range(g, v, args.length, args.limit)
    for p in paths:
        print(format_path(p), file=out)
    if truncated:
        print("... (truncated)", file=out)
    return 0


def cmd_boundary(args, out):
    g = _load(args.file)
    res = boundary_paths(g, parse_vertex(g, args.vertex), args.depth, limit=args.limit)
    for p in res.paths:
        print(format_path(p), file=out)
    if res.truncated:
        print("... (truncated)", file=out)
    return 0


def cmd_cyl(args, out):
    g = _load(args.file)
    if args.op == "member":
        w = parse_path(g, args.operands[0])
        z = parse_cylinder(g, args.operands[1], general=args.general)
        result = cyl.member(w, z)
        print("true" if result else "false", file=out)
        return 0
    if args.op == "intersect":
        zs = [parse_cylinder(g, s) for s in args.operands]
        both = cyl.intersect_all(zs)
        print("empty" if both is None else format_cylinder(both), file=out)
        return 0
    if args.op == "refine":
        z = parse_cylinder(g, args.operands[0], general=True)
        lam = parse_path(g, args.operands[1])
        print(format_cylinder(cyl.refine_to_basic(z, lam)), file=out)
        return 0
    x, y = (parse_path(g, s) for s in args.operands)
    a, b = cyl.separate(g, x, y)
    print(f"{format_cylinder(a)}\n{format_cylinder(b)}", file=out)
    return 0


def cmd_desing(args, out):
    g = _load(args.file)
    f, tails = desingularise(g, _policy(args.policy))
    _write(args.output, format_graph(f), out)
    print(f"# collapsible tails: {' '.join(tails) if tails else '(none)'}", file=out if args.output else sys.stderr)
    if args.emit_dot:
        _write(args.emit_dot, to_dot(f, args.levels), out)
    return 0


def cmd_collapse(args, out):
    g = _load(args.file)
    result = collapse(g, args.tails if args.tails is not None else [t.id for t in g.tails])
    _write(args.output, format_graph(result.collapsed), out)
    if args.emit_dot:
        _write(args.emit_dot, to_dot(result.collapsed, args.levels), out)
    return 0


def cmd_check_collapsible(args, out):
    g = _load(args.file)
    if (args.tail is None) == (args.path is None):
        raise UsageError("give exactly one of --tail or --path")
    target = args.tail if args.tail is not None else parse_path(g, args.path)
    if isinstance(target, str) and not g.has_tail(target):
        raise UsageError(f"unknown tail {target!r}")
    verdict = check_collapsible(g, target)
    print(verdict, file=out)
    return 0 if verdict.ok else 1


def cmd_iso(args, out):
    iso = iso_check(_load(args.first), _load(args.second))
    if iso is None:
        print("not isomorphic", file=out)
        return 1
    print(f"isomorphic: {iso}", file=out)
    return 0


def cmd_phi(args, out):
    g = _load(args.file)
    m = _collapse_map(g, args.tails)
    if args.command == "phi-inv":
        print(format_path(m.phi_inv(parse_path(m.e, args.path))), file=out)
        return 0
    if args.command == "phi-inf":
        if args.inverse:
            print(format_path(m.phi_inf_inv(parse_path(m.e, args.path))), file=out)
        else:
            print(format_path(m.phi_inf(parse_path(g, args.path))), file=out)
        return 0
    print(format_path(m.phi(parse_path(g, args.path))), file=out)
    return 0


def cmd_witness(args, out):
    g = _load(args.file)
    m = _collapse_map(g, args.tails)
    if args.command == "witness-image":
        z = parse_cylinder(m.e, args.first)
        lam = parse_path(g, args.second)
        print(format_path(m.open_image_witness(z, lam, depth=args.depth)), file=out)
    else:
        gamma = parse_path(g, args.first)
        x = parse_path(m.e, args.second)
        print(format_cylinder(m.open_preimage_witness(gamma, x, depth=args.depth)), file=out)
    return 0


def _q_report(a) -> str:
    lines = []
    F = a.support
    for nu, c in dg.q_decompose(a).items():
        live = dg.q_is_nonzero(a.graph, F, nu)
        lines.append(f"q({format_path(nu)}): coefficient {c}{'' if live else '  (projection is zero)'}")
    return "\n".join(lines)


def cmd_diag(args, out):
    g = _load(args.file)
    ops = args.operands
    need = {"mul": 2, "norm": 1, "q": 1, "eval": 2, "pi": 1, "compress": 1, "reduce": 1, "diagram": 2}[args.op]
    if len(ops) != need:
        raise UsageError(f"diag {args.op} takes {need} operand(s)")
    if args.op == "mul":
        a, b = parse_element(g, ops[0]), parse_element(g, ops[1])
        print(format_element(dg.multiply(a, b)), file=out)
    elif args.op == "norm":
        a = parse_element(g, ops[0])
        print(f"norm = {dg.norm(a)}  (norm^2 = {dg.norm_squared(a)})", file=out)
    elif args.op == "q":
        a = parse_element(g, ops[0])
        print(_q_report(a) or "0", file=out)
    elif args.op == "eval":
        x = parse_path(g, ops[0])
        print(dg.character_eval(x, parse_element(g, ops[1])), file=out)
    else:
        m = _collapse_map(g, args.tails)
        if args.op == "pi":
            print(format_element(dg.pi_map(m, parse_element(m.e, ops[0]))), file=out)
        elif args.op == "compress":
            print(format_element(dg.corner_compress(m, parse_path(g, ops[0]))), file=out)
        elif args.op == "reduce":
            print(format_element(dg.pi_inverse_reduce(m, parse_path(g, ops[0]))), file=out)
        else:
            x, mu = parse_path(g, ops[0]), parse_path(m.e, ops[1])
            ok = dg.diagram_check(m, x, mu)
            print("commutes" if ok else "DOES NOT COMMUTE", file=out)
            return 0 if ok else 1
    return 0


def cmd_verify_all(args, out):
    results = run_all(_load(args.file), args.depth)
    print(format_table(results), file=out)
    return 0 if all(r.passed for r in results) else 1


def cmd_emit_dot(args, out):
    _write(args.output, to_dot(_load(args.file), args.levels), out)
    return 0


def build_parser(depth: int) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphpaths", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=depth, help=f"search depth (default {depth}, from ${DEPTH_ENV})")
    common.add_argument("--limit", type=int, default=None, help="cap on enumerated paths")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, "check a graph file").add_argument("file")

    p = add("paths", cmd_paths, "paths of a given length with range VERTEX")
    p.add_argument("file")
    p.add_argument("vertex")
    p.add_argument("length", type=int)
    p.add_argument("--leq", action="store_true", help="list vE^<=n instead of vE^n")

    p = add("boundary", cmd_boundary, "boundary paths with range VERTEX")
    p.add_argument("file")
    p.add_argument("vertex")

    p = add("cyl", cmd_cyl, "cylinder sets: member, intersect, refine, separate")
    p.add_argument("op", choices=["member", "intersect", "refine", "separate"])
    p.add_argument("file")
    p.add_argument("operands", nargs="+")
    p.add_argument("--general", action="store_true", help="forbidden items are paths, not edges")

    for name, fn, help_ in (
        ("desing", cmd_desing, "desingularise a tail-free graph"),
        ("collapse", cmd_collapse, "collapse tails"),
    ):
        p = add(name, fn, help_)
        p.add_argument("file")
        p.add_argument("-o", "--output", help="write the resulting graph here")
        p.add_argument("--emit-dot", metavar="PATH", help="also write DOT")
        p.add_argument("--levels", type=int, default=3, help="tail levels drawn in DOT")
        if name == "desing":
            p.add_argument("--policy", help="entries per tail position: 'k' or 'prefix;cycle' counts")
        else:
            p.add_argument("--tails", nargs="*", help="tail ids (default: all)")

    p = add("check-collapsible", cmd_check_collapsible, "conditions C1-C5 for a tail or infinite path")
    p.add_argument("file")
    p.add_argument("--tail")
    p.add_argument("--path", help="an infinite path literal")

    p = add("iso", cmd_iso, "bounded isomorphism check")
    p.add_argument("first")
    p.add_argument("second")

    for name, help_ in (
        ("phi", "image of a finite path of F"),
        ("phi-inv", "preimage of a path of the collapsed graph"),
        ("phi-inf", "image of an infinite path of F"),
    ):
        p = add(name, cmd_phi, help_)
        p.add_argument("file", help="graph F with tails")
        p.add_argument("path")
        p.add_argument("--tails", nargs="*", help="collapsed tails (default: all)")
        if name == "phi-inf":
            p.add_argument("--inverse", action="store_true", help="map a boundary path of E back")

    for name, a, b in (
        ("witness-image", "cylinder", "path"),
        ("witness-preimage", "gamma", "point"),
    ):
        p = add(name, cmd_witness, "continuity witness")
        p.add_argument("file", help="graph F with tails")
        p.add_argument("first", metavar=a)
        p.add_argument("second", metavar=b)
        p.add_argument("--tails", nargs="*")

    p = add("diag", cmd_diag, "diagonal algebra")
    p.add_argument("op", choices=["mul", "norm", "q", "eval", "pi", "compress", "reduce", "diagram"])
    p.add_argument("file")
    p.add_argument("operands", nargs="+")
    p.add_argument("--tails", nargs="*")

    add("verify-all", cmd_verify_all, "run the invariant suite").add_argument("file")

    p = add("emit-dot", cmd_emit_dot, "render a graph as DOT")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--levels", type=int, default=3)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        parser = build_parser(_default_depth())
    except UsageError as exc:
        print(f"graphpaths: error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.depth < 0:
        print("graphpaths: error: --depth must be nonnegative", file=sys.stderr)
        return 2
    try:
        return args.fn(args, out)
    except (UsageError, GraphSyntaxError, LiteralError) as exc:
        print(f"graphpaths: error: {exc}", file=sys.stderr)
        return 2
    except (CollapseError, FactorizationError, PathError, GraphError, dg.DiagonalError, ValueError) as exc:
        print(f"graphpaths: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
