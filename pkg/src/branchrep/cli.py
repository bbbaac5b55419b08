"""Command-line front end.

Five subcommands: ``analyze`` (level structure, components, roles, shape
checks), ``synthesize`` (canonical branching system for an acyclic graph),
``induce`` (generator family from a system, with relation checks and
optional matrix export), ``verify`` (re-check a saved system or
representation), ``align`` (adapted basis, block-to-block check, extracted
system, unitary, residuals).

Exit codes: 0 all checks pass, 1 a check fails (reports are still written),
2 malformed input or a graph shape the construction does not cover.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .alignment import (
    B2B_TOL,
    RANK_TOL,
    REP_TOL,
    RESIDUAL_TOL,
    AlignmentError,
    NotApplicableError,
    RepresentationError,
    align_bases,
    check_b2b,
    check_representation,
    extract_branching_system,
    rep_from_json,
    verify_equivalence,
)
from .branching import (
    BranchingError,
    branching_from_json,
    branching_to_json,
    synthesize,
    validate,
)
from .graph import DirectedGraph, GraphError, decompose, graph_from_json, truncate
from .operators import OperatorError, coordinate_export, induce, to_matrix, verify_ck
from .structure import (
    ClassificationKind,
    StructureError,
    check_structure,
    component_classifications,
    component_is_p_simple,
    level_decomposition,
    level_report,
    vertex_roles,
)

CK_TOL = 1e-12

_TOL_DEFAULTS = {
    "ck": CK_TOL,
    "rep": REP_TOL,
    "rank": RANK_TOL,
    "b2b": B2B_TOL,
    "residual": RESIDUAL_TOL,
}


class CLIError(ValueError):
    pass


def _load_json(path: str) -> object:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_graph(path: str) -> DirectedGraph:
    return graph_from_json(_load_json(path))


def _parse_tols(pairs: Optional[Sequence[str]]) -> dict[str, float]:
    tols = dict(_TOL_DEFAULTS)
    for item in pairs or []:
        name, sep, value = item.partition("=")
        if not sep or name not in tols:
            raise CLIError(
                f"--tol expects NAME=VALUE with NAME one of {sorted(tols)}, got {item!r}"
            )
        try:
            tols[name] = float(value)
        except ValueError:
            raise CLIError(f"--tol {name}: {value!r} is not a number") from None
    return tols


def _scalar(value: object) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return "{}" if isinstance(value, dict) else "[]"
    return str(value)


def _text_lines(doc: object, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(doc, dict):
        for key, value in doc.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(value)}")
    elif isinstance(doc, list):
        for value in doc:
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}-")
                lines.extend(_text_lines(value, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(value)}")
    else:
        lines.append(f"{pad}{_scalar(doc)}")
    return lines


def _emit(doc: object, args: argparse.Namespace) -> None:
    if args.format == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        text = "\n".join(_text_lines(doc)) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- subcommands --------------------------------------------------------------


def cmd_analyze(args: argparse.Namespace) -> int:
    _parse_tols(args.tol)  # analyze uses none, but a typo should still be caught
    g = _load_graph(args.graph)
    boundary = frozenset(args.boundary or [])
    if args.truncate is not None:
        if args.truncate < 0:
            raise CLIError("--truncate must be nonnegative")
        g, auto_boundary = truncate(g, args.truncate)
        boundary = boundary | auto_boundary
    for v in boundary:
        if not g.has_vertex(v):
            raise CLIError(f"boundary vertex '{v}' is not in the (truncated) graph")

    d = level_decomposition(g)
    dec = decompose(g)
    classifications = component_classifications(g, d)
    checks = check_structure(g, d)

    components = []
    for comp, c in classifications:
        entry: dict = {"vertices": list(comp), "classification": c.to_json()}
        if c.kind is not ClassificationKind.IRREGULAR and component_is_p_simple(g, comp):
            roles = vertex_roles(g, d, comp, c)
            entry["roles"] = {v: r.to_json() for v, r in roles.items()}
        components.append(entry)

    out = {
        "seed": args.seed,
        "graph": {"vertexCount": g.vertex_count, "edgeCount": g.edge_count},
        "levels": level_report(g, d, boundary),
        "isolated": list(dec.isolated),
        "components": components,
        "structureChecks": checks.to_json(),
        "passed": checks.passed,
    }
    _emit(out, args)
    return 0 if checks.passed else 1


def cmd_synthesize(args: argparse.Namespace) -> int:
    _parse_tols(args.tol)
    g = _load_graph(args.graph)
    dims: dict[str, int] = {}
    for item in args.dim or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise CLIError(f"--dim expects VERTEX=K, got {item!r}")
        try:
            dims[name] = int(value)
        except ValueError:
            raise CLIError(f"--dim {name}: {value!r} is not an integer") from None
    if args.default_dim is not None:
        for v in g.sinks():
            dims.setdefault(v, args.default_dim)
    bs = synthesize(g, dims, slack=args.slack)
    _emit(branching_to_json(bs), args)
    return 0


def _write_matrices(fam, g: DirectedGraph, out_dir: str) -> None:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    for e in g.edges:
        (directory / f"edge-{e.id}.txt").write_text(
            coordinate_export(to_matrix(fam, e.id)), encoding="utf-8"
        )
    for v in g.vertices:
        (directory / f"vertex-{v}.txt").write_text(
            coordinate_export(to_matrix(fam, v)), encoding="utf-8"
        )


def cmd_induce(args: argparse.Namespace) -> int:
    tols = _parse_tols(args.tol)
    g = _load_graph(args.graph)
    bs = branching_from_json(_load_json(args.system))
    val = validate(bs, g)
    if not val.passed:
        _emit({"seed": args.seed, "validation": val.to_json(), "passed": False}, args)
        return 1
    fam = induce(bs, g)
    ck = verify_ck(fam, g, float_tol=tols["ck"])
    if args.out_dir:
        _write_matrices(fam, g, args.out_dir)
    out = {
        "seed": args.seed,
        "validation": val.to_json(),
        "relations": ck.to_json(),
        "exact": ck.exact,
        "passed": ck.passed,
    }
    _emit(out, args)
    return 0 if ck.passed else 1


def cmd_verify(args: argparse.Namespace) -> int:
    tols = _parse_tols(args.tol)
    g = _load_graph(args.graph)
    doc = _load_json(args.subject)
    if isinstance(doc, dict) and "universe" in doc:
        bs = branching_from_json(doc)
        report = validate(bs, g)
        kind = "branchingSystem"
    elif isinstance(doc, dict) and "dim" in doc:
        rep = rep_from_json(doc)
        report = check_representation(rep, g, tol=tols["rep"], rank_tol=tols["rank"])
        kind = "representation"
    else:
        raise CLIError(
            "cannot tell what to verify: expected a top-level 'universe' "
            "(branching system) or 'dim' (representation)"
        )
    out = {
        "seed": args.seed,
        "kind": kind,
        "checks": report.to_json(),
        "passed": report.passed,
    }
    _emit(out, args)
    return 0 if report.passed else 1


def cmd_align(args: argparse.Namespace) -> int:
    tols = _parse_tols(args.tol)
    g = _load_graph(args.graph)
    rep = rep_from_json(_load_json(args.rep))

    rep_report = check_representation(rep, g, tol=tols["rep"], rank_tol=tols["rank"])
    if not rep_report.passed:
        bad = rep_report.failures()[0]
        out = {
            "seed": args.seed,
            "representationChecks": rep_report.to_json(),
            "passed": False,
        }
        _emit(out, args)
        print(f"check failed: relation '{bad.item}': {bad.witness}", file=sys.stderr)
        return 1

    d = level_decomposition(g)
    classifications = component_classifications(g, d)
    try:
        ba = align_bases(rep, g, d, classifications, rank_tol=tols["rank"])
        b2b = check_b2b(rep, ba, g, tol=tols["b2b"], allow_phase=args.phase_slack)
        if not b2b.passed:
            out = {"seed": args.seed, "b2b": b2b.to_json(), "passed": False}
            _emit(out, args)
            bad = b2b.failures()[0]
            print(f"check failed: edge '{bad.item}': {bad.witness}", file=sys.stderr)
            return 1
        cert = extract_branching_system(rep, ba, g, tol=tols["b2b"])
        cert = verify_equivalence(rep, cert, g)
    except NotApplicableError:
        raise
    except AlignmentError as err:
        _emit({"seed": args.seed, "error": str(err), "passed": False}, args)
        print(f"check failed: {err}", file=sys.stderr)
        return 1

    passed = cert.passes(tols["residual"])
    out = {
        "seed": args.seed,
        "system": branching_to_json(cert.system),
        "b2b": b2b.to_json(),
        "edgeResiduals": cert.edge_residuals,
        "vertexResiduals": cert.vertex_residuals,
        "maxResidual": cert.max_residual,
        "passed": passed,
    }
    if args.out_dir:
        directory = Path(args.out_dir)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "system.json").write_text(
            json.dumps(branching_to_json(cert.system), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        (directory / "unitary.txt").write_text(
            coordinate_export(cert.unitary), encoding="utf-8"
        )
        (directory / "report.json").write_text(
            json.dumps(out, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    _emit(out, args)
    return 0 if passed else 1


# -- wiring --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="branchrep",
        description="Level structure, branching systems, and basis alignment "
        "for directed-graph operator families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=0, help="echoed into reports for bookkeeping"
    )
    common.add_argument(
        "--tol",
        action="append",
        metavar="NAME=VALUE",
        help=f"override a tolerance; names: {', '.join(sorted(_TOL_DEFAULTS))}",
    )
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")

    p = sub.add_parser("analyze", parents=[common], help="level structure and shape checks")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--truncate", type=int, metavar="N", help="keep only the first N vertices")
    p.add_argument(
        "--boundary",
        action="append",
        metavar="VERTEX",
        help="mark a vertex as sitting on a truncation boundary",
    )
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser(
        "synthesize", parents=[common], help="canonical branching system for an acyclic graph"
    )
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--dim", action="append", metavar="VERTEX=K", help="index count at a sink")
    p.add_argument(
        "--default-dim", type=int, metavar="K", help="index count for sinks not named by --dim"
    )
    p.add_argument(
        "--slack", type=int, default=0, metavar="N", help="extra indices outside every domain set"
    )
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser(
        "induce", parents=[common], help="generator family from a branching system"
    )
    p.add_argument("system", help="branching-system JSON file")
    p.add_argument("--graph", required=True, help="graph JSON file")
    p.add_argument("--out-dir", metavar="DIR", help="write one coordinate-format matrix per generator")
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser(
        "verify", parents=[common], help="re-check a saved branching system or representation"
    )
    p.add_argument("subject", help="branching-system or representation JSON file")
    p.add_argument("--graph", required=True, help="graph JSON file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser(
        "align", parents=[common], help="adapted basis, extracted system, and residuals"
    )
    p.add_argument("rep", help="representation JSON file")
    p.add_argument("--graph", required=True, help="graph JSON file")
    p.add_argument("--out-dir", metavar="DIR", help="write system.json, unitary.txt, report.json")
    p.add_argument(
        "--phase-slack",
        action="store_true",
        help="accept block-to-block matches that differ by a unit scalar",
    )
    p.set_defaults(func=cmd_align)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except NotApplicableError as err:
        print(f"theorem not applicable: {err}", file=sys.stderr)
        return 2
    except (
        CLIError,
        GraphError,
        StructureError,
        BranchingError,
        OperatorError,
        RepresentationError,
        json.JSONDecodeError,
        OSError,
    ) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except AlignmentError as err:
        print(f"check failed: {err}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())
