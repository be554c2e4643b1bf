"""Positioning an annotated formula tree as a left-to-right dataflow scene.

Leaves occupy the leftmost layer, each parent sits one layer right of its
rightmost child, and a final result capsule sits right of the root.
Siblings stack top to bottom in source order inside disjoint vertical
bands, which is what guarantees boxes never overlap. Parents are
vertically centered on their children (nudged minimally when their own
box would not fit the band otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ast
from .addresses import format_address
from .evaluate import AnnotatedNode
from .values import format_value, is_error


@dataclass(frozen=True)
class LayoutConfig:
    layer_gap: float = 48.0  # horizontal space between layers
    sibling_gap: float = 14.0  # vertical space between sibling bands
    char_width: float = 8.0
    line_height: float = 16.0
    padding: float = 10.0
    max_range_preview: int = 5  # range values shown before truncation

    def __post_init__(self) -> None:
        for name in ("layer_gap", "sibling_gap", "char_width", "line_height", "padding"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.max_range_preview < 1:
            raise ValueError("max_range_preview must be positive")


@dataclass(frozen=True)
class SceneNode:
    id: str
    kind: str  # literal | cell-ref | range-ref | operator | function | result
    shape: str  # rounded-rect | tag | circle | rect | capsule
    primary_label: str
    value_label: str
    x: float
    y: float
    w: float
    h: float
    style_class: str  # normal | error | error-origin | inactive-branch
    ref_group: int | None = None


@dataclass(frozen=True)
class SceneEdge:
    src: str
    dst: str
    points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class SceneGraph:
    nodes: tuple[SceneNode, ...]
    edges: tuple[SceneEdge, ...]
    bounds: tuple[float, float]


_SHAPES = {
    "literal": "rounded-rect",
    "cell-ref": "tag",
    "range-ref": "tag",
    "operator": "circle",
    "function": "rect",
    "result": "capsule",
}


def node_kind(e: ast.Expr) -> str:
    if isinstance(e, (ast.NumberLit, ast.TextLit, ast.BoolLit)):
        return "literal"
    if isinstance(e, ast.CellRef):
        return "cell-ref"
    if isinstance(e, ast.RangeRef):
        return "range-ref"
    if isinstance(e, (ast.Unary, ast.Binary)):
        return "operator"
    return "function"


def primary_label(e: ast.Expr, value) -> str:
    if isinstance(e, (ast.NumberLit, ast.TextLit, ast.BoolLit)):
        return format_value(value)
    if isinstance(e, ast.CellRef):
        return format_address(e.address)
    if isinstance(e, ast.RangeRef):
        return f"{format_address(e.start)}:{format_address(e.end)}"
    if isinstance(e, ast.Unary):
        return e.op.value
    if isinstance(e, ast.Binary):
        return e.op.value
    return e.name  # Call


def range_preview(entries: tuple, limit: int) -> str:
    shown = [format_value(v) for v in entries[:limit]]
    text = ", ".join(shown)
    extra = len(entries) - limit
    if extra > 0:
        text += f"…({extra} more)"
    return text


def value_label(node: AnnotatedNode, cfg: LayoutConfig) -> str:
    if isinstance(node.expr, (ast.NumberLit, ast.TextLit, ast.BoolLit)):
        return ""  # a literal's single label is its value
    if isinstance(node.expr, ast.RangeRef) and node.entries is not None:
        return range_preview(node.entries, cfg.max_range_preview)
    return format_value(node.value)


def style_class(node: AnnotatedNode) -> str:
    if is_error(node.value):
        return "error-origin" if node.is_error_origin else "error"
    if not node.on_result_path:
        return "inactive-branch"
    return "normal"


def measure_node(kind: str, primary: str, value: str, cfg: LayoutConfig) -> tuple[float, float]:
    """Deterministic text-metric box size for a node."""
    longest = max(len(primary), len(value), 1)
    lines = 1 if kind == "literal" else 2
    w = cfg.padding + cfg.char_width * longest
    h = cfg.padding + cfg.line_height * lines
    if kind == "operator":
        side = max(w, h)  # operators render as circles, so keep them round
        return (side, side)
    return (w, h)


@dataclass
class _Placed:
    node: AnnotatedNode
    id: str
    kind: str
    primary: str
    value: str
    w: float
    h: float
    layer: int
    children: list["_Placed"] = field(default_factory=list)
    center_y: float = 0.0
    x: float = 0.0

    @property
    def y(self) -> float:
        return self.center_y - self.h / 2


def _build(node: AnnotatedNode, node_id: str, cfg: LayoutConfig) -> _Placed:
    children = [_build(c, f"{node_id}.{i}", cfg) for i, c in enumerate(node.children)]
    kind = node_kind(node.expr)
    primary = primary_label(node.expr, node.value)
    value = value_label(node, cfg)
    w, h = measure_node(kind, primary, value, cfg)
    layer = max((c.layer for c in children), default=-1) + 1
    return _Placed(node, node_id, kind, primary, value, w, h, layer, children)


def _extent(p: _Placed, cfg: LayoutConfig, memo: dict[int, float]) -> float:
    key = id(p)
    if key not in memo:
        if p.children:
            total = sum(_extent(c, cfg, memo) for c in p.children)
            total += cfg.sibling_gap * (len(p.children) - 1)
            memo[key] = max(p.h, total)
        else:
            memo[key] = p.h
    return memo[key]


def _place(p: _Placed, band_top: float, cfg: LayoutConfig, memo: dict[int, float]) -> None:
    band = _extent(p, cfg, memo)
    if not p.children:
        p.center_y = band_top + band / 2
        return
    child_total = sum(_extent(c, cfg, memo) for c in p.children)
    child_total += cfg.sibling_gap * (len(p.children) - 1)
    y = band_top + (band - child_total) / 2
    for c in p.children:
        _place(c, y, cfg, memo)
        y += _extent(c, cfg, memo) + cfg.sibling_gap
    mid = (p.children[0].center_y + p.children[-1].center_y) / 2
    lo = band_top + p.h / 2
    hi = band_top + band - p.h / 2
    p.center_y = min(max(mid, lo), hi)


def layout(tree: AnnotatedNode, cfg: LayoutConfig | None = None) -> SceneGraph:
    """Produce the positioned, styled scene for an annotated tree."""
    if cfg is None:
        cfg = LayoutConfig()
    root = _build(tree, "0", cfg)

    result_primary = "="
    result_value = format_value(tree.value)
    result_w, result_h = measure_node("result", result_primary, result_value, cfg)
    result_layer = root.layer + 1

    memo: dict[int, float] = {}
    margin = cfg.sibling_gap / 2
    content_h = max(_extent(root, cfg, memo), result_h)
    _place(root, margin + (content_h - _extent(root, cfg, memo)) / 2, cfg, memo)
    result_cy = min(
        max(root.center_y, margin + result_h / 2),
        margin + content_h - result_h / 2,
    )

    placed = _preorder(root)
    layer_width: dict[int, float] = {result_layer: result_w}
    for p in placed:
        layer_width[p.layer] = max(layer_width.get(p.layer, 0.0), p.w)
    layer_x: dict[int, float] = {}
    x = margin
    for layer in range(result_layer + 1):
        layer_x[layer] = x
        x += layer_width.get(layer, 0.0) + cfg.layer_gap
    for p in placed:
        p.x = layer_x[p.layer]
    result_x = layer_x[result_layer]

    nodes = [
        SceneNode(
            id=p.id,
            kind=p.kind,
            shape=_SHAPES[p.kind],
            primary_label=p.primary,
            value_label=p.value,
            x=p.x,
            y=p.y,
            w=p.w,
            h=p.h,
            style_class=style_class(p.node),
            ref_group=p.node.ref_group,
        )
        for p in placed
    ]
    nodes.append(
        SceneNode(
            id="result",
            kind="result",
            shape=_SHAPES["result"],
            primary_label=result_primary,
            value_label=result_value,
            x=result_x,
            y=result_cy - result_h / 2,
            w=result_w,
            h=result_h,
            style_class="error" if is_error(tree.value) else "normal",
        )
    )

    by_id = {p.id: p for p in placed}
    edges = []
    for p in placed:
        if p.id == "0":
            target_x, target_cy, target_id = result_x, result_cy, "result"
        else:
            parent = by_id[p.id.rsplit(".", 1)[0]]
            target_x, target_cy, target_id = parent.x, parent.center_y, parent.id
        edges.append(SceneEdge(p.id, target_id, _edge_points(p, target_x, target_cy, cfg)))

    width = result_x + result_w + margin
    height = 2 * margin + content_h
    return SceneGraph(tuple(nodes), tuple(edges), (width, height))


def _preorder(root: _Placed) -> list[_Placed]:
    out: list[_Placed] = []
    stack = [root]
    while stack:
        p = stack.pop()
        out.append(p)
        stack.extend(reversed(p.children))
    return out


def _edge_points(
    p: _Placed, target_x: float, target_cy: float, cfg: LayoutConfig
) -> tuple[tuple[float, float], ...]:
    start = (p.x + p.w, p.center_y)
    end = (target_x, target_cy)
    if start[1] == end[1]:
        return (start, end)
    xm = target_x - cfg.layer_gap / 2
    return (start, (xm, start[1]), (xm, end[1]), end)
