"""Evaluation over the error-extended domain with full annotation.

``evaluate`` walks an expression tree post-order, left to right, and
returns a mirror tree in which every node carries its computed value.
Errors are values here, never exceptions: they propagate like any other
result, and the annotation records where each one originated. IF is the
one selective function: its untaken branch is still evaluated and
annotated, but its value is excluded from the result and its nodes are
flagged as off the result path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import ast
from .addresses import CellAddress
from .functions import FunctionSpec, builtin_registry, call_function, if_taken_index
from .ops import apply_binary, apply_unary
from .values import EMPTY, ErrorKind, RangeValues, Value, is_error

ResolveFn = Callable[[CellAddress], Value]


def _resolve_empty(_: CellAddress) -> Value:
    return EMPTY


@dataclass
class EvalContext:
    """Where cell references get their values from.

    ``resolve`` must be total: unset cells return Empty (None).
    """

    resolve: ResolveFn = _resolve_empty
    registry: dict[str, FunctionSpec] = field(default_factory=builtin_registry)

    @classmethod
    def from_values(cls, cells: dict[str, Value]) -> "EvalContext":
        from .addresses import parse_address

        table = {parse_address(addr).key: value for addr, value in cells.items()}

        def resolve(a: CellAddress) -> Value:
            return table.get(a.key, EMPTY)

        return cls(resolve=resolve)


@dataclass
class AnnotatedNode:
    """One expression node together with its computed value.

    ``entries`` is set only on range nodes (the expanded cell values in
    row-major order). ``ref_group`` ties together repeated occurrences of
    one reference; it is shared group numbering, assigned in first-seen
    order, and only present when the reference occurs more than once.
    """

    expr: ast.Expr
    value: Value
    children: list["AnnotatedNode"] = field(default_factory=list)
    is_error_origin: bool = False
    on_result_path: bool = True
    ref_group: int | None = None
    entries: tuple[Value, ...] | None = None

    def walk(self) -> Iterator["AnnotatedNode"]:
        yield self
        for child in self.children:
            yield from child.walk()


def expand_range_values(r: ast.RangeRef, resolve: ResolveFn) -> tuple[Value, ...]:
    """Resolve every cell of the rectangle, row-major."""
    out: list[Value] = []
    for row in range(r.start.row, r.end.row + 1):
        for col in range(r.start.column, r.end.column + 1):
            out.append(resolve(CellAddress(col, row)))
    return tuple(out)


def _range_node_value(entries: tuple[Value, ...]) -> Value:
    for v in entries:
        if is_error(v):
            return v
    return EMPTY


def _argument_of(node: AnnotatedNode) -> Value | RangeValues:
    """The value a parent consumes from a child annotation."""
    if isinstance(node.expr, ast.RangeRef) and not is_error(node.value):
        return RangeValues(node.entries or ())
    return node.value


def _mark_off_path(node: AnnotatedNode) -> None:
    node.on_result_path = False
    for child in node.children:
        _mark_off_path(child)


def _ref_key(e: ast.Expr):
    if isinstance(e, ast.CellRef):
        return ("cell", e.address)
    if isinstance(e, ast.RangeRef):
        return ("range", e.start, e.end)
    return None


def _assign_ref_groups(root: AnnotatedNode) -> None:
    order: list = []
    counts: dict = {}
    for node in root.walk():
        key = _ref_key(node.expr)
        if key is None:
            continue
        if key not in counts:
            order.append(key)
        counts[key] = counts.get(key, 0) + 1
    groups = {key: i for i, key in enumerate(k for k in order if counts[k] > 1)}
    for node in root.walk():
        key = _ref_key(node.expr)
        if key is not None and key in groups:
            node.ref_group = groups[key]


def _evaluate_node(e: ast.Expr, ctx: EvalContext) -> AnnotatedNode:
    if isinstance(e, ast.NumberLit):
        return AnnotatedNode(e, e.value)
    if isinstance(e, ast.TextLit):
        return AnnotatedNode(e, e.value)
    if isinstance(e, ast.BoolLit):
        return AnnotatedNode(e, e.value)
    if isinstance(e, ast.CellRef):
        return AnnotatedNode(e, ctx.resolve(e.address))
    if isinstance(e, ast.RangeRef):
        entries = expand_range_values(e, ctx.resolve)
        return AnnotatedNode(e, _range_node_value(entries), entries=entries)
    if isinstance(e, ast.Unary):
        child = _evaluate_node(e.operand, ctx)
        value = apply_unary(e.op, _argument_of(child))
        return AnnotatedNode(e, value, [child])
    if isinstance(e, ast.Binary):
        left = _evaluate_node(e.left, ctx)
        right = _evaluate_node(e.right, ctx)
        value = apply_binary(e.op, _argument_of(left), _argument_of(right))
        return AnnotatedNode(e, value, [left, right])
    if isinstance(e, ast.Call):
        children = [_evaluate_node(arg, ctx) for arg in e.args]
        spec = ctx.registry[e.name]
        args = [_argument_of(c) for c in children]
        value = call_function(spec, args)
        node = AnnotatedNode(e, value, children)
        if spec.strictness == "selective" and spec.name == "IF":
            taken = if_taken_index(args[0])
            for idx in (1, 2):
                if idx != taken:
                    _mark_off_path(children[idx])
        return node
    raise TypeError(f"not an Expr: {e!r}")


def _mark_error_origins(node: AnnotatedNode) -> None:
    for child in node.children:
        _mark_error_origins(child)
    if is_error(node.value):
        node.is_error_origin = not any(c.value == node.value for c in node.children)


def evaluate(e: ast.Expr, ctx: EvalContext | None = None) -> AnnotatedNode:
    """Annotate every subexpression of ``e`` with its value."""
    if ctx is None:
        ctx = EvalContext()
    root = _evaluate_node(e, ctx)
    _mark_error_origins(root)
    _assign_ref_groups(root)
    return root
