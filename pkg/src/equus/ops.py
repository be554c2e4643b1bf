"""Value-level kernels for the unary and binary operators.

Both entry points are strict: an error operand is returned unchanged, the
left one winning when both err. Coercions follow the host-spreadsheet
rules (booleans count as 0/1 in arithmetic, numeric text parses, blanks
act as the context's zero value).
"""

from __future__ import annotations

import math

from .ast import BinaryOp, UnaryOp
from .values import (
    ErrorKind,
    RangeValues,
    Value,
    checked_number,
    is_error,
    to_number,
    to_text,
)


def number_power(base: float, exponent: float) -> Value:
    if base == 0.0 and exponent == 0.0:
        return ErrorKind.NUM
    if base == 0.0 and exponent < 0.0:
        return ErrorKind.DIV0
    try:
        return checked_number(math.pow(base, exponent))
    except (ValueError, OverflowError):
        # negative base with fractional exponent, or overflow
        return ErrorKind.NUM


def number_divide(left: float, right: float) -> Value:
    if right == 0.0:
        return ErrorKind.DIV0
    return checked_number(left / right)


def number_mod(left: float, right: float) -> Value:
    """Remainder with the divisor's sign."""
    if right == 0.0:
        return ErrorKind.DIV0
    return checked_number(left - right * math.floor(left / right))


# Cross-type ordering: numbers < text < booleans. Text compares
# case-insensitively. Blanks coerce to the other side's zero value.
_TYPE_RANK = {"number": 0, "text": 1, "boolean": 2}


def _comparison_key(v: Value) -> tuple[int, float | str]:
    if isinstance(v, bool):
        return (_TYPE_RANK["boolean"], 1.0 if v else 0.0)
    if isinstance(v, float):
        return (_TYPE_RANK["number"], v)
    if isinstance(v, str):
        return (_TYPE_RANK["text"], v.casefold())
    raise TypeError(f"not comparable: {v!r}")


def _coerce_blank_pair(left: Value, right: Value) -> tuple[Value, Value]:
    if left is None:
        left = _zero_like(right)
    if right is None:
        right = _zero_like(left)
    return left, right


def _zero_like(other: Value) -> Value:
    if isinstance(other, bool):
        return False
    if isinstance(other, str):
        return ""
    return 0.0


def _compare(op: BinaryOp, left: Value, right: Value) -> Value:
    left, right = _coerce_blank_pair(left, right)
    if isinstance(left, RangeValues) or isinstance(right, RangeValues):
        return ErrorKind.VALUE
    lk, rk = _comparison_key(left), _comparison_key(right)
    if op is BinaryOp.EQ:
        return lk == rk
    if op is BinaryOp.NEQ:
        return lk != rk
    if op is BinaryOp.LT:
        return lk < rk
    if op is BinaryOp.GT:
        return lk > rk
    if op is BinaryOp.LE:
        return lk <= rk
    return lk >= rk


_ARITHMETIC = {
    BinaryOp.ADD: lambda a, b: checked_number(a + b),
    BinaryOp.SUBTRACT: lambda a, b: checked_number(a - b),
    BinaryOp.MULTIPLY: lambda a, b: checked_number(a * b),
    BinaryOp.DIVIDE: number_divide,
    BinaryOp.POWER: number_power,
}


def apply_binary(op: BinaryOp, left: Value, right: Value) -> Value:
    if is_error(left):
        return left
    if is_error(right):
        return right
    if op in _ARITHMETIC:
        ln = to_number(left)
        if is_error(ln):
            return ln
        rn = to_number(right)
        if is_error(rn):
            return rn
        return _ARITHMETIC[op](ln, rn)
    if op is BinaryOp.CONCAT:
        lt = to_text(left)
        if is_error(lt):
            return lt
        rt = to_text(right)
        if is_error(rt):
            return rt
        return lt + rt
    return _compare(op, left, right)


def apply_unary(op: UnaryOp, operand: Value) -> Value:
    if is_error(operand):
        return operand
    n = to_number(operand)
    if is_error(n):
        return n
    if op is UnaryOp.NEGATE:
        return checked_number(-n)
    if op is UnaryOp.PLUS:
        return n
    return checked_number(n / 100.0)
