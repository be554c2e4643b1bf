"""Scene graph output: standalone SVG and the JSON scene document.

Both renderings are pure functions of their input, byte for byte: the
same scene always serializes to the same text. The JSON schema is the
contract the HTTP service and the grid UI consume:

    {
      "nodes": [{id, kind, shape, label, value, x, y, w, h, style, refGroup}],
      "edges": [{from, to, points: [[x, y], ...]}],
      "bounds": {"w": ..., "h": ...}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from xml.sax.saxutils import escape, quoteattr

from .layout import SceneEdge, SceneGraph, SceneNode

NODE_KINDS = ("literal", "cell-ref", "range-ref", "operator", "function", "result")
NODE_SHAPES = ("rounded-rect", "tag", "circle", "rect", "capsule")
STYLE_CLASSES = ("normal", "error", "error-origin", "inactive-branch")


@dataclass(frozen=True)
class Theme:
    font_family: str = "ui-monospace, Menlo, Consolas, monospace"
    font_size: float = 12.0
    text_color: str = "#1f2933"
    edge_color: str = "#9aa5b1"
    fills: dict = field(
        default_factory=lambda: {
            "normal": "#f5f7fa",
            "error": "#ffe3e3",
            "error-origin": "#ffa8a8",
            "inactive-branch": "#f1f3f5",
        }
    )
    strokes: dict = field(
        default_factory=lambda: {
            "normal": "#52606d",
            "error": "#c92a2a",
            "error-origin": "#862e2e",
            "inactive-branch": "#ced4da",
        }
    )
    inactive_opacity: float = 0.45
    accents: tuple = ("#1c7ed6", "#e8590c", "#2b8a3e", "#862e9c", "#0b7285", "#a61e4d")


def _n(x: float) -> str:
    """Compact numeric attribute text."""
    if x == int(x):
        return str(int(x))
    return f"{x:g}"


def _shape_svg(node: SceneNode, theme: Theme) -> str:
    fill = theme.fills[node.style_class]
    stroke = theme.strokes[node.style_class]
    width = "1.5"
    if node.ref_group is not None:
        stroke = theme.accents[node.ref_group % len(theme.accents)]
        width = "2.5"
    style = f'fill="{fill}" stroke="{stroke}" stroke-width="{width}"'
    x, y, w, h = node.x, node.y, node.w, node.h
    if node.shape == "circle":
        r = max(w, h) / 2
        return f'<circle cx={quoteattr(_n(x + w / 2))} cy={quoteattr(_n(y + h / 2))} r={quoteattr(_n(r))} {style}/>'
    if node.shape == "tag":
        notch = min(10.0, w / 4)
        pts = [
            (x + notch, y),
            (x + w, y),
            (x + w, y + h),
            (x + notch, y + h),
            (x, y + h / 2),
        ]
        points = " ".join(f"{_n(px)},{_n(py)}" for px, py in pts)
        return f"<polygon points={quoteattr(points)} {style}/>"
    rx = {"rounded-rect": 6.0, "rect": 2.0, "capsule": h / 2}[node.shape]
    return (
        f"<rect x={quoteattr(_n(x))} y={quoteattr(_n(y))} "
        f"width={quoteattr(_n(w))} height={quoteattr(_n(h))} rx={quoteattr(_n(rx))} {style}/>"
    )


def _node_svg(node: SceneNode, theme: Theme) -> list[str]:
    cx = node.x + node.w / 2
    cy = node.y + node.h / 2
    opacity = ""
    if node.style_class == "inactive-branch":
        opacity = f' opacity="{_n(theme.inactive_opacity)}"'
    lines = [f'<g class="node {node.kind} {node.style_class}"{opacity}>']
    lines.append(f"<title>{escape(node.primary_label)}</title>")
    lines.append(_shape_svg(node, theme))
    text_common = (
        f'text-anchor="middle" fill="{theme.text_color}" '
        f'font-size="{_n(theme.font_size)}"'
    )
    dy = theme.font_size * 0.62
    if node.value_label == "" and node.kind == "literal":
        lines.append(
            f"<text x={quoteattr(_n(cx))} y={quoteattr(_n(cy + dy / 2))} {text_common}>"
            f"{escape(node.primary_label)}</text>"
        )
    else:
        lines.append(
            f"<text x={quoteattr(_n(cx))} y={quoteattr(_n(cy - 3))} {text_common}>"
            f"{escape(node.primary_label)}</text>"
        )
        lines.append(
            f"<text x={quoteattr(_n(cx))} y={quoteattr(_n(cy + dy + 3))} {text_common} "
            f'font-weight="bold">{escape(node.value_label)}</text>'
        )
    lines.append("</g>")
    return lines


def to_svg(graph: SceneGraph, theme: Theme | None = None) -> str:
    """Render a scene graph as a standalone SVG document."""
    if theme is None:
        theme = Theme()
    w, h = graph.bounds
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (
            f'<svg xmlns="http://www.w3.org/2000/svg" width={quoteattr(_n(w))} '
            f'height={quoteattr(_n(h))} viewBox={quoteattr(f"0 0 {_n(w)} {_n(h)}")} '
            f"font-family={quoteattr(theme.font_family)}>"
        ),
    ]
    for edge in graph.edges:
        d = "M " + " L ".join(f"{_n(x)} {_n(y)}" for x, y in edge.points)
        out.append(
            f'<path d={quoteattr(d)} fill="none" stroke="{theme.edge_color}" stroke-width="1.5"/>'
        )
    for node in graph.nodes:
        out.extend(_node_svg(node, theme))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def to_json(graph: SceneGraph) -> str:
    """Serialize a scene graph to the canonical JSON document."""
    doc = {
        "nodes": [
            {
                "id": n.id,
                "kind": n.kind,
                "shape": n.shape,
                "label": n.primary_label,
                "value": n.value_label,
                "x": n.x,
                "y": n.y,
                "w": n.w,
                "h": n.h,
                "style": n.style_class,
                "refGroup": n.ref_group,
            }
            for n in graph.nodes
        ],
        "edges": [
            {"from": e.src, "to": e.dst, "points": [[x, y] for x, y in e.points]}
            for e in graph.edges
        ],
        "bounds": {"w": graph.bounds[0], "h": graph.bounds[1]},
    }
    return json.dumps(doc, indent=2) + "\n"


class SceneJSONError(ValueError):
    """A scene document that does not match the schema. The message names
    the JSON path of the offending value."""


def _fail(path: str, problem: str):
    raise SceneJSONError(f"{path}: {problem}")


def _need(obj: dict, key: str, path: str):
    if key not in obj:
        _fail(path, f"missing key {key!r}")
    return obj[key]


def _as_str(v, path: str, allowed: tuple | None = None) -> str:
    if not isinstance(v, str):
        _fail(path, f"expected string, got {type(v).__name__}")
    if allowed is not None and v not in allowed:
        _fail(path, f"expected one of {allowed}, got {v!r}")
    return v


def _as_number(v, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(path, f"expected number, got {type(v).__name__}")
    return float(v)


def from_json(text: str) -> SceneGraph:
    """Parse and validate a scene document; inverse of :func:`to_json`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise SceneJSONError(f"$: not valid JSON ({err.msg} at line {err.lineno})") from err
    if not isinstance(doc, dict):
        _fail("$", "expected an object")

    raw_nodes = _need(doc, "nodes", "$")
    if not isinstance(raw_nodes, list):
        _fail("$.nodes", "expected an array")
    nodes = []
    ids = set()
    for i, rn in enumerate(raw_nodes):
        path = f"$.nodes[{i}]"
        if not isinstance(rn, dict):
            _fail(path, "expected an object")
        node_id = _as_str(_need(rn, "id", path), f"{path}.id")
        if node_id in ids:
            _fail(f"{path}.id", f"duplicate node id {node_id!r}")
        ids.add(node_id)
        ref_group = rn.get("refGroup")
        if ref_group is not None and (isinstance(ref_group, bool) or not isinstance(ref_group, int)):
            _fail(f"{path}.refGroup", "expected integer or null")
        nodes.append(
            SceneNode(
                id=node_id,
                kind=_as_str(_need(rn, "kind", path), f"{path}.kind", NODE_KINDS),
                shape=_as_str(_need(rn, "shape", path), f"{path}.shape", NODE_SHAPES),
                primary_label=_as_str(_need(rn, "label", path), f"{path}.label"),
                value_label=_as_str(_need(rn, "value", path), f"{path}.value"),
                x=_as_number(_need(rn, "x", path), f"{path}.x"),
                y=_as_number(_need(rn, "y", path), f"{path}.y"),
                w=_as_number(_need(rn, "w", path), f"{path}.w"),
                h=_as_number(_need(rn, "h", path), f"{path}.h"),
                style_class=_as_str(_need(rn, "style", path), f"{path}.style", STYLE_CLASSES),
                ref_group=ref_group,
            )
        )

    raw_edges = _need(doc, "edges", "$")
    if not isinstance(raw_edges, list):
        _fail("$.edges", "expected an array")
    edges = []
    for i, re_ in enumerate(raw_edges):
        path = f"$.edges[{i}]"
        if not isinstance(re_, dict):
            _fail(path, "expected an object")
        src = _as_str(_need(re_, "from", path), f"{path}.from")
        dst = _as_str(_need(re_, "to", path), f"{path}.to")
        for end, label in ((src, "from"), (dst, "to")):
            if end not in ids:
                _fail(f"{path}.{label}", f"unknown node id {end!r}")
        raw_points = _need(re_, "points", path)
        if not isinstance(raw_points, list) or len(raw_points) < 2:
            _fail(f"{path}.points", "expected an array of at least two [x, y] pairs")
        points = []
        for j, rp in enumerate(raw_points):
            p_path = f"{path}.points[{j}]"
            if not isinstance(rp, list) or len(rp) != 2:
                _fail(p_path, "expected an [x, y] pair")
            points.append((_as_number(rp[0], f"{p_path}[0]"), _as_number(rp[1], f"{p_path}[1]")))
        edges.append(SceneEdge(src, dst, tuple(points)))

    raw_bounds = _need(doc, "bounds", "$")
    if not isinstance(raw_bounds, dict):
        _fail("$.bounds", "expected an object")
    bounds = (
        _as_number(_need(raw_bounds, "w", "$.bounds"), "$.bounds.w"),
        _as_number(_need(raw_bounds, "h", "$.bounds"), "$.bounds.h"),
    )
    return SceneGraph(tuple(nodes), tuple(edges), bounds)
