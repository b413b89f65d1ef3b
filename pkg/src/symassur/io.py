"""Framework files (JSON), DOT export and bundled fixtures.

A framework file looks like::

    {"dimension": 2,
     "group": {"schoenflies": "Cn", "n": 3},
     "vertices": [{"id": "u", "kind": "inner"}, {"id": "v", "kind": "pin"}],
     "edges": [{"id": "e1", "tail": "u", "head": "v", "gain": "r2"}],
     "positions": {"u": [-1, 2], "v": ["-sqrt(3)/4", "1/4"]},
     "orientation": {"e1": "forward"}}

Positions and orientation are optional. Coordinates may be numbers or small
arithmetic expressions using ``sqrt``, ``sin``, ``cos`` and ``pi``.
"""
from __future__ import annotations

import ast
import json
import math
import operator
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .decompose import GROUND, AssurDecomposition
from .errors import GraphError, GroupError, ParseError
from .graphs import Edge, GainGraph, Vertex, vkey, INNER, PIN
from .group import make_schoenflies
from .orbit import Configuration
from .orient import FORWARD, REVERSE, Orientation

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_FUNCS = {"sqrt": math.sqrt, "sin": math.sin, "cos": math.cos}
_NAMES = {"pi": math.pi}


def eval_number(text) -> float:
    """Evaluate a numeric literal or a small arithmetic expression safely."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    if not isinstance(text, str):
        raise ValueError(f"not a number: {text!r}")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS
                and len(node.args) == 1 and not node.keywords):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported expression {text!r}")

    try:
        return float(ev(ast.parse(text.strip(), mode="eval")))
    except SyntaxError:
        raise ValueError(f"cannot parse number {text!r}") from None


@dataclass
class FrameworkFile:
    gain_graph: GainGraph
    positions: Configuration | None = None
    orientation: Orientation | None = None
    group_spec: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)


def _line_of(text: str, needle: str):
    if not text:
        return None
    idx = text.find(json.dumps(needle))
    return None if idx < 0 else text.count("\n", 0, idx) + 1


def parse_text(text: str) -> FrameworkFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    return parse_obj(obj, text)


def parse(path) -> FrameworkFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_text(text)


def parse_obj(obj: dict, text: str = "") -> FrameworkFile:
    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object", 1)
    for key in ("dimension", "group", "vertices", "edges"):
        if key not in obj:
            raise ParseError(f"missing required field {key!r}")
    known = {"dimension", "group", "vertices", "edges", "positions", "orientation", "name", "description"}
    for key in obj:
        if key not in known:
            raise ParseError(f"unknown field {key!r}", _line_of(text, key))
    d = obj["dimension"]
    if d not in (2, 3):
        raise ParseError(f"dimension must be 2 or 3, got {d!r}", _line_of(text, "dimension"))
    gspec = obj["group"]
    if not isinstance(gspec, dict):
        raise ParseError("group must be an object", _line_of(text, "group"))
    try:
        grp, rep = make_schoenflies(gspec.get("schoenflies", "C1"), gspec.get("n", 1), d,
                                    axis=gspec.get("axis"), mirror_normal=gspec.get("mirror_normal"))
    except GroupError as exc:
        raise ParseError(f"group: {exc}", _line_of(text, "group")) from None

    verts = []
    if not isinstance(obj["vertices"], list):
        raise ParseError("vertices must be a list", _line_of(text, "vertices"))
    for v in obj["vertices"]:
        if not isinstance(v, dict) or "id" not in v:
            raise ParseError("every vertex needs an id", _line_of(text, "vertices"))
        vid = str(v["id"])
        kind = v.get("kind", INNER)
        if kind not in (INNER, PIN):
            raise ParseError(f"vertex {vid!r}: kind must be 'inner' or 'pin'", _line_of(text, vid))
        try:
            stab = frozenset(grp.check(x) for x in v.get("stabilizer", ["id"]))
        except GroupError as exc:
            raise ParseError(f"vertex {vid!r}: {exc}", _line_of(text, vid)) from None
        verts.append(Vertex(vid, kind, stab))
    if not any(v.kind == INNER for v in verts):
        raise ParseError("no inner vertices", _line_of(text, "vertices"))

    edges = []
    if not isinstance(obj["edges"], list):
        raise ParseError("edges must be a list", _line_of(text, "edges"))
    ids = {v.id for v in verts}
    for e in obj["edges"]:
        if not isinstance(e, dict) or not {"id", "tail", "head"} <= set(e):
            raise ParseError("every edge needs id, tail and head", _line_of(text, "edges"))
        eid = str(e["id"])
        for end in ("tail", "head"):
            if str(e[end]) not in ids:
                raise ParseError(f"edge {eid!r} references unknown vertex {e[end]!r}", _line_of(text, eid))
        try:
            gain = grp.check(e.get("gain", "id"))
        except GroupError as exc:
            raise ParseError(f"edge {eid!r}: {exc}", _line_of(text, eid)) from None
        edges.append(Edge(eid, str(e["tail"]), str(e["head"]), gain))
    try:
        gg = GainGraph(rep, verts, edges)
    except GraphError as exc:
        raise ParseError(str(exc), _first_line(text, str(exc))) from None

    cfg = None
    if obj.get("positions") is not None:
        pos = obj["positions"]
        pts = {}
        for v in gg.vertices:
            if v not in pos:
                raise ParseError(f"positions: missing vertex {v!r}", _line_of(text, "positions"))
            try:
                p = np.array([eval_number(c) for c in pos[v]], dtype=float)
            except (ValueError, TypeError) as exc:
                raise ParseError(f"positions of {v!r}: {exc}", _line_of(text, "positions")) from None
            pts[v] = p
        extra = set(pos) - set(gg.vertices)
        if extra:
            raise ParseError(f"positions: unknown vertex {sorted(extra)[0]!r}", _line_of(text, "positions"))
        cfg = Configuration(pts)
        try:
            cfg.check(gg, atol=1e-9)
        except GraphError as exc:
            raise ParseError(f"positions: {exc}", _line_of(text, "positions")) from None

    orient = None
    if obj.get("orientation") is not None:
        od = obj["orientation"]
        for eid, dval in od.items():
            if eid not in gg.edge_ids:
                raise ParseError(f"orientation: unknown edge {eid!r}", _line_of(text, "orientation"))
            if dval not in (FORWARD, REVERSE):
                raise ParseError(f"orientation of {eid!r} must be 'forward' or 'reverse'", _line_of(text, "orientation"))
        missing = set(gg.edge_ids) - set(od)
        if missing:
            raise ParseError(f"orientation: missing edge {sorted(missing, key=vkey)[0]!r}", _line_of(text, "orientation"))
        orient = Orientation({e: od[e] for e in gg.edge_ids})
    return FrameworkFile(gg, cfg, orient, dict(gspec), obj)


def _first_line(text, message):
    for token in message.split("'")[1::2]:
        line = _line_of(text, token)
        if line:
            return line
    return None


def group_spec(gg: GainGraph, hint: dict | None = None) -> dict:
    if hint:
        return dict(hint)
    g = gg.group
    tag = getattr(g, "schoenflies", "Cn")
    return {"schoenflies": tag, "n": g.n} if tag != "Cs" else {"schoenflies": "Cs"}


def to_obj(gg: GainGraph, positions: Configuration | None = None, orientation: Orientation | None = None,
           group: dict | None = None) -> dict:
    g = gg.group
    out = {
        "dimension": gg.d,
        "group": group_spec(gg, group),
        "vertices": [],
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head, "gain": e.gain} for e in gg.edges],
    }
    for v in gg.vertices:
        item = {"id": v, "kind": gg.vertex(v).kind}
        if len(gg.stabilizer(v)) > 1:
            item["stabilizer"] = sorted(gg.stabilizer(v), key=g.sort_key)
        out["vertices"].append(item)
    if positions is not None:
        out["positions"] = {v: [float(c) for c in positions[v]] for v in gg.vertices}
    if orientation is not None:
        out["orientation"] = dict(orientation.direction)
    return out


def emit(ff: FrameworkFile) -> str:
    return json.dumps(to_obj(ff.gain_graph, ff.positions, ff.orientation, ff.group_spec), indent=2,
                      ensure_ascii=False) + "\n"


def _q(s) -> str:
    return json.dumps(str(s), ensure_ascii=False)


def emit_dot(gg: GainGraph, orientation: Orientation | None = None) -> str:
    """DOT text of a gain graph; edges carry their gains, arrows follow ``orientation``."""
    lines = ["digraph gain_graph {"]
    for v in sorted(gg.vertices, key=vkey):
        shape = "box" if gg.is_pin(v) else "circle"
        lines.append(f"  {_q(v)} [shape={shape}];")
    arcs = []
    for e in gg.edges:
        if orientation is None:
            s, t, gain = e.tail, e.head, e.gain
        else:
            s, t = orientation.source(gg, e.id), orientation.target(gg, e.id)
            gain = e.gain if s == e.tail else gg.group.inv(e.gain)
        arcs.append((vkey(e.id), f"  {_q(s)} -> {_q(t)} [label={_q(f'{e.id}: {gain}')}];"))
    lines += [a for _, a in sorted(arcs)]
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot_decomposition(dec: AssurDecomposition) -> str:
    """DOT text of the block graph: components as boxes, the ground as a double circle."""
    lines = ["digraph assur_blocks {", f"  {_q(GROUND)} [shape=doublecircle];"]
    for c in sorted(dec.components, key=vkey):
        label = "{" + ", ".join(dec.components[c]) + "}"
        lines.append(f"  {_q(c)} [shape=box, label={_q(label)}];")
    for a, b in sorted(dec.block_edges, key=lambda ab: (vkey(ab[0]), vkey(ab[1]))):
        lines.append(f"  {_q(a)} -> {_q(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def fixture_names() -> list:
    root = resources.files("symassur") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> FrameworkFile:
    """Load one of the bundled example frameworks by name."""
    root = resources.files("symassur") / "fixtures"
    path = root / f"{name}.json"
    if not path.is_file():
        raise ParseError(f"no bundled fixture named {name!r}")
    return parse_text(path.read_text())
