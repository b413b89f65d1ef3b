"""Command-line interface: ``symassur <command> FILE [options]``.

Exit codes: 0 ok, 1 negative analysis result, 2 input error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .decompose import (block_triangular_form, decompose, isostatic_comparison,
                        lift_decomposition, project_decomposition, scc_decomposition, subgroup_decomposition)
from .drivers import covering_motion_dimension, drive
from .errors import (ActionNotFree, GainViolation, GraphError, GroupError, InstanceTooLarge, NoOrientation,
                     NotAssur, NotIsostatic, ParseError, SingularMatrix, VerificationFailed)
from .extend import ONE, ExtensionSpec, apply_extension, classify_one_extension
from .graphs import EDGE_BOUND, pinned_isostatic_counts
from .orbit import RANK_TOL, build_orbit_matrix, is_pinned_S_isostatic, rank, sample_regular_configuration
from .orient import s_directed_orientation, verify_orientation

OK, NEGATIVE, INPUT_ERROR, NUMERIC_ERROR = 0, 1, 2, 3


def _config(ff, args):
    if ff.positions is not None:
        return ff.positions, False
    return sample_regular_configuration(ff.gain_graph, args.seed), True


def _orientation(ff):
    gg = ff.gain_graph
    if ff.orientation is not None:
        if not verify_orientation(gg, ff.orientation):
            raise NoOrientation("the orientation in the file does not have the required out-degrees")
        return ff.orientation
    return s_directed_orientation(gg)


def _emit(report: dict, args, out):
    text = json.dumps(report, indent=2, ensure_ascii=False, sort_keys=False) + "\n"
    if args.json:
        Path(args.json).write_text(text)
    out.write(text)


def _dot(args, text):
    if args.dot:
        Path(args.dot).write_text(text)


def cmd_check(ff, args, out):
    gg = ff.gain_graph
    try:
        counts = pinned_isostatic_counts(gg, edge_bound=args.edge_bound, seed=args.seed)
        counts_json = {"satisfied": counts.satisfied, "mode": counts.mode, "witness": list(counts.witness),
                       "reason": counts.reason}
    except InstanceTooLarge:
        counts, counts_json = None, {"satisfied": None, "mode": "numeric", "reason": "too large to enumerate"}
    verdict = is_pinned_S_isostatic(gg, args.trials, args.seed, args.tol)
    report = {"rows": verdict.rows, "columns": verdict.cols, "counts": counts_json,
              "isostatic": verdict.isostatic, "ranks": verdict.ranks}
    if verdict.witness is not None:
        report["positions"] = verdict.witness.as_lists()
    if gg.d == 2 and gg.is_free():
        report["comparison"] = isostatic_comparison(gg, args.trials, args.seed)
    _emit(report, args, out)
    return OK if verdict.isostatic else NEGATIVE


def cmd_orient(ff, args, out):
    gg = ff.gain_graph
    o = _orientation(ff)
    _dot(args, io.emit_dot(gg, o))
    _emit({"orientation": dict(o.direction), "out_degrees": dict(o.out_degrees(gg))}, args, out)
    return OK


def cmd_decompose(ff, args, out):
    gg = ff.gain_graph
    dec = scc_decomposition(gg, _orientation(ff))
    cfg, sampled = _config(ff, args)
    M = build_orbit_matrix(gg, cfg)
    bt = block_triangular_form(M, gg, dec)
    report = {"n_components": len(dec), **dec.to_json(),
              "block_triangular": {"verified": bt.verified, "max_offdiagonal": bt.max_offdiag}}
    if sampled:
        report["positions"] = cfg.as_lists()
    _dot(args, io.emit_dot_decomposition(dec))
    out.write(f"{len(dec)} components\n")
    _emit(report, args, out)
    return OK


def cmd_drive(ff, args, out):
    gg = ff.gain_graph
    if args.edge is None:
        raise ParseError("drive needs --edge")
    gg.edge(args.edge)
    dec = decompose(gg)
    cfg, sampled = _config(ff, args)
    r = drive(gg, cfg, args.edge, dec, tol=args.tol)
    report = r.to_json()
    report["covering_motion_dimension"] = covering_motion_dimension(gg, cfg, args.edge)
    if sampled:
        report["positions"] = cfg.as_lists()
    _emit(report, args, out)
    return OK


def cmd_lift(ff, args, out):
    gg = ff.gain_graph
    dec = scc_decomposition(gg, _orientation(ff))
    lifted = lift_decomposition(gg, dec)
    back = project_decomposition(lifted.decomposition, lifted.cover)
    report = {"quotient": dec.to_json(), "cover": lifted.decomposition.to_json(),
              "parent": lifted.parent, "n_cover_components": len(lifted.decomposition),
              "round_trip": back.same_as(dec)}
    _dot(args, io.emit_dot_decomposition(lifted.decomposition))
    _emit(report, args, out)
    return OK if report["round_trip"] else NEGATIVE


def cmd_subgroup(ff, args, out):
    gg = ff.gain_graph
    if not args.elements:
        raise ParseError("subgroup needs --elements, e.g. --elements id,r2,r4")
    elems = [x.strip() for x in args.elements.split(",") if x.strip()]
    try:
        sub = subgroup_decomposition(gg, elems)
    except GroupError as exc:
        raise ParseError(str(exc)) from None
    report = {"subgroup": sorted(sub.gain_graph.group.elements, key=gg.group.sort_key),
              "gain_graph": io.to_obj(sub.gain_graph),
              "decomposition": sub.decomposition.to_json(), "projection": sub.projection}
    _dot(args, io.emit_dot_decomposition(sub.decomposition))
    _emit(report, args, out)
    return OK


def cmd_extend(ff, args, out):
    gg = ff.gain_graph
    if not args.spec:
        raise ParseError("extend needs --spec (a JSON object or a path to one)")
    text = Path(args.spec).read_text() if Path(args.spec).is_file() else args.spec
    try:
        spec = ExtensionSpec.from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"extension spec: {exc.msg}") from None
    new = apply_extension(gg, spec)
    obj = io.to_obj(new, group=ff.group_spec)
    if spec.kind == ONE:
        c = classify_one_extension(gg, decompose(gg), spec)
        obj_report = {"label": c.label, "recomputed": c.recomputed, "agrees": c.agrees, "heuristic": c.heuristic}
        sys.stderr.write(json.dumps(obj_report) + "\n")
    _emit(obj, args, out)
    return OK


def cmd_matrix(ff, args, out):
    gg = ff.gain_graph
    cfg, sampled = _config(ff, args)
    M = build_orbit_matrix(gg, cfg)
    csv = M.to_csv()
    if args.json:
        Path(args.json).write_text(json.dumps({"rank": rank(M, args.tol), "rows": M.rows,
                                               "columns": [f"{v}[{j}]" for v, j in M.columns],
                                               "matrix": M.matrix.tolist(),
                                               "positions": cfg.as_lists()}, indent=2) + "\n")
    out.write(csv)
    return OK


COMMANDS = {
    "check": (cmd_check, "counting and rank tests for pinned symmetric isostaticity"),
    "orient": (cmd_orient, "out-degree orientation by the pebble game"),
    "decompose": (cmd_decompose, "symmetric Assur decomposition and block-triangular check"),
    "drive": (cmd_drive, "velocity field of one driven edge orbit"),
    "lift": (cmd_lift, "lift the decomposition to the covering graph and project it back"),
    "subgroup": (cmd_subgroup, "decompose under a subgroup"),
    "extend": (cmd_extend, "apply a 0-, 1- or loop-1-extension"),
    "matrix": (cmd_matrix, "pinned orbit rigidity matrix as CSV"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symassur", description="Symmetric Assur decompositions of pinned frameworks.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("file", help="framework JSON file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float, default=RANK_TOL)
        sp.add_argument("--trials", type=int, default=5)
        sp.add_argument("--dot", help="write DOT output here")
        sp.add_argument("--json", help="also write the JSON report here")
        sp.add_argument("--edge-bound", type=int, default=EDGE_BOUND)
        if name == "drive":
            sp.add_argument("--edge", help="id of the driven edge orbit")
        if name == "subgroup":
            sp.add_argument("--elements", help="comma-separated subgroup elements")
        if name == "extend":
            sp.add_argument("--spec", help="extension spec as JSON text or a file path")
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    handler = COMMANDS[args.command][0]
    try:
        ff = io.parse(args.file)
        return handler(ff, args, out)
    except (ParseError, GraphError, GroupError, GainViolation) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return INPUT_ERROR
    except (SingularMatrix, VerificationFailed) as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return NUMERIC_ERROR
    except (NoOrientation, NotIsostatic, NotAssur, ActionNotFree) as exc:
        sys.stderr.write(f"{exc}\n")
        return NEGATIVE


def main():
    sys.exit(run())
