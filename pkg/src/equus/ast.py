"""Formula expression trees and the canonical unparser.

Nodes are immutable; two trees compare equal exactly when they are
structurally identical. Number literals remember their source text so a
formula can be reproduced the way it was written; programmatic trees can
use :meth:`NumberLit.of`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .addresses import CellAddress, format_address
from .values import format_number


class UnaryOp(enum.Enum):
    NEGATE = "-"
    PLUS = "+"
    PERCENT = "%"  # postfix


class BinaryOp(enum.Enum):
    ADD = "+"
    SUBTRACT = "-"
    MULTIPLY = "*"
    DIVIDE = "/"
    POWER = "^"
    CONCAT = "&"
    EQ = "="
    NEQ = "<>"
    LT = "<"
    GT = ">"
    LE = "<="
    GE = ">="


# Binding powers, loosest to tightest. All binary operators associate to
# the left, including ^, and prefix -/+ bind tighter than ^ (so -2^2 is
# (-2)^2 = 4). Both are deliberate: a formula must mean here exactly what
# the dominant spreadsheet product makes it mean, quirks included.
COMPARE_BP = 10
CONCAT_BP = 20
ADD_BP = 30
MUL_BP = 40
POWER_BP = 50
PERCENT_BP = 60
PREFIX_BP = 70
ATOM_BP = 100

BINARY_BP: dict[BinaryOp, int] = {
    BinaryOp.EQ: COMPARE_BP,
    BinaryOp.NEQ: COMPARE_BP,
    BinaryOp.LT: COMPARE_BP,
    BinaryOp.GT: COMPARE_BP,
    BinaryOp.LE: COMPARE_BP,
    BinaryOp.GE: COMPARE_BP,
    BinaryOp.CONCAT: CONCAT_BP,
    BinaryOp.ADD: ADD_BP,
    BinaryOp.SUBTRACT: ADD_BP,
    BinaryOp.MULTIPLY: MUL_BP,
    BinaryOp.DIVIDE: MUL_BP,
    BinaryOp.POWER: POWER_BP,
}


class Expr:
    """Base class for formula expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class NumberLit(Expr):
    text: str
    value: float

    @staticmethod
    def of(value: float) -> "NumberLit":
        # Literal text is always non-negative; negation is an operator.
        if value < 0:
            raise ValueError("number literals are non-negative; wrap in Unary(NEGATE)")
        return NumberLit(format_number(float(value)), float(value))


@dataclass(frozen=True)
class TextLit(Expr):
    value: str


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class CellRef(Expr):
    address: CellAddress


@dataclass(frozen=True)
class RangeRef(Expr):
    start: CellAddress
    end: CellAddress

    def __post_init__(self) -> None:
        if self.start.column > self.end.column or self.start.row > self.end.row:
            raise ValueError("range is not normalized (start must be top-left)")


@dataclass(frozen=True)
class Unary(Expr):
    op: UnaryOp
    operand: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: BinaryOp
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple[Expr, ...] = field(default_factory=tuple)


def normalize_range(a: CellAddress, b: CellAddress) -> RangeRef:
    """Build a RangeRef with start at the top-left corner. Absolute markers
    travel with the column/row component they were written on."""
    (c1, ca), (c2, cb) = sorted(
        [(a.column, a.column_absolute), (b.column, b.column_absolute)]
    )
    (r1, ra), (r2, rb) = sorted([(a.row, a.row_absolute), (b.row, b.row_absolute)])
    return RangeRef(CellAddress(c1, r1, ca, ra), CellAddress(c2, r2, cb, rb))


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, Unary):
        return (e.operand,)
    if isinstance(e, Binary):
        return (e.left, e.right)
    if isinstance(e, Call):
        return e.args
    return ()


def _binding_power(e: Expr) -> int:
    if isinstance(e, Binary):
        return BINARY_BP[e.op]
    if isinstance(e, Unary):
        return PERCENT_BP if e.op is UnaryOp.PERCENT else PREFIX_BP
    return ATOM_BP


def _escape_text(s: str) -> str:
    return '"' + s.replace('"', '""') + '"'


def _unparse(e: Expr) -> str:
    if isinstance(e, NumberLit):
        return e.text
    if isinstance(e, TextLit):
        return _escape_text(e.value)
    if isinstance(e, BoolLit):
        return "TRUE" if e.value else "FALSE"
    if isinstance(e, CellRef):
        return format_address(e.address)
    if isinstance(e, RangeRef):
        return f"{format_address(e.start)}:{format_address(e.end)}"
    if isinstance(e, Unary):
        inner = _wrap(e.operand, _binding_power(e))
        if e.op is UnaryOp.PERCENT:
            return inner + "%"
        return e.op.value + inner
    if isinstance(e, Binary):
        bp = BINARY_BP[e.op]
        left = _wrap(e.left, bp)
        # Left-associative: an equal-precedence right operand needs parens.
        right = _wrap(e.right, bp + 1)
        return left + e.op.value + right
    if isinstance(e, Call):
        return e.name + "(" + ",".join(_unparse(a) for a in e.args) + ")"
    raise TypeError(f"not an Expr: {e!r}")


def _wrap(e: Expr, min_bp: int) -> str:
    text = _unparse(e)
    if _binding_power(e) < min_bp:
        return "(" + text + ")"
    return text


def unparse(e: Expr) -> str:
    """Render a tree back to formula text, starting with "=".

    Parentheses appear only where precedence or associativity requires
    them, so re-parsing the result rebuilds an identical tree.
    """
    return "=" + _unparse(e)
