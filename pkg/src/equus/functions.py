"""Built-in spreadsheet functions.

Every function is either strict (any error argument is returned as the
result, leftmost first) or selective (IF, whose result depends on only
the chosen branch). The aggregate functions SUM, AVERAGE, MIN, MAX and
COUNT additionally accept range arguments; a range anywhere else is a
#VALUE! error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation, ROUND_DOWN, ROUND_HALF_UP
from typing import Callable

from .ops import number_mod, number_power
from .values import (
    ErrorKind,
    RangeValues,
    Value,
    checked_number,
    is_error,
    to_boolean,
    to_number,
)

Arg = Value | RangeValues
Kernel = Callable[[list[Arg]], Value]


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    arity_min: int
    arity_max: int | None  # None means variadic without bound
    strictness: str  # "strict" | "selective"
    kernel: Kernel
    range_aware: bool = False

    def arity_ok(self, count: int) -> bool:
        if count < self.arity_min:
            return False
        return self.arity_max is None or count <= self.arity_max


def call_function(spec: FunctionSpec, args: list[Arg]) -> Value:
    """Apply a function spec to already-evaluated argument values."""
    if not spec.arity_ok(len(args)):
        raise ValueError(f"{spec.name} called with {len(args)} arguments")
    if spec.strictness == "strict":
        for arg in args:
            if is_error(arg):
                return arg
            if isinstance(arg, RangeValues):
                for entry in arg.entries:
                    if is_error(entry):
                        return entry
        if not spec.range_aware and any(isinstance(a, RangeValues) for a in args):
            return ErrorKind.VALUE
    return spec.kernel(args)


def if_taken_index(condition: Value) -> int | None:
    """Which IF argument the condition selects (1 or 2), or None when the
    condition is an error or not coercible to a boolean."""
    b = to_boolean(condition) if not isinstance(condition, RangeValues) else ErrorKind.VALUE
    if is_error(b):
        return None
    return 1 if b else 2


def _if_kernel(args: list[Arg]) -> Value:
    condition = args[0]
    if isinstance(condition, RangeValues):
        return ErrorKind.VALUE
    if is_error(condition):
        return condition
    taken = if_taken_index(condition)
    if taken is None:
        return ErrorKind.VALUE
    chosen = args[taken]
    if isinstance(chosen, RangeValues):
        return ErrorKind.VALUE
    if chosen is None:
        return 0.0  # a blank branch shows as zero, as in the host product
    return chosen


def _collect_numbers(args: list[Arg]) -> list[float] | ErrorKind:
    """Numbers an aggregate works over: direct arguments coerce, range
    entries contribute only actual numbers."""
    numbers: list[float] = []
    for arg in args:
        if isinstance(arg, RangeValues):
            numbers.extend(v for v in arg.entries if isinstance(v, float) and not isinstance(v, bool))
        else:
            n = to_number(arg)
            if is_error(n):
                return n
            numbers.append(n)
    return numbers


def _sum_kernel(args: list[Arg]) -> Value:
    numbers = _collect_numbers(args)
    if is_error(numbers):
        return numbers
    return checked_number(math.fsum(numbers))


def _average_kernel(args: list[Arg]) -> Value:
    numbers = _collect_numbers(args)
    if is_error(numbers):
        return numbers
    if not numbers:
        return ErrorKind.DIV0
    return checked_number(math.fsum(numbers) / len(numbers))


def _min_kernel(args: list[Arg]) -> Value:
    numbers = _collect_numbers(args)
    if is_error(numbers):
        return numbers
    return min(numbers) if numbers else 0.0


def _max_kernel(args: list[Arg]) -> Value:
    numbers = _collect_numbers(args)
    if is_error(numbers):
        return numbers
    return max(numbers) if numbers else 0.0


def _count_kernel(args: list[Arg]) -> Value:
    count = 0
    for arg in args:
        if isinstance(arg, RangeValues):
            count += sum(
                1 for v in arg.entries if isinstance(v, float) and not isinstance(v, bool)
            )
        elif not is_error(to_number(arg)) and arg is not None:
            count += 1
    return float(count)


def _bool_args(args: list[Arg]) -> list[bool] | ErrorKind:
    out: list[bool] = []
    for arg in args:
        b = to_boolean(arg) if not isinstance(arg, RangeValues) else ErrorKind.VALUE
        if is_error(b):
            return b
        out.append(b)
    return out


def _and_kernel(args: list[Arg]) -> Value:
    bools = _bool_args(args)
    return bools if is_error(bools) else all(bools)


def _or_kernel(args: list[Arg]) -> Value:
    bools = _bool_args(args)
    return bools if is_error(bools) else any(bools)


def _not_kernel(args: list[Arg]) -> Value:
    b = to_boolean(args[0]) if not isinstance(args[0], RangeValues) else ErrorKind.VALUE
    return b if is_error(b) else not b


def _numeric_1(fn: Callable[[float], float]) -> Kernel:
    def kernel(args: list[Arg]) -> Value:
        n = to_number(args[0])
        if is_error(n):
            return n
        try:
            return checked_number(fn(n))
        except (ValueError, OverflowError):
            return ErrorKind.NUM

    return kernel


def _digits_arg(arg: Arg) -> int | ErrorKind:
    n = to_number(arg)
    if is_error(n):
        return n
    return max(-400, min(400, int(n)))  # truncate toward zero, clamp


def _quantize(x: float, digits: int, mode: str) -> Value:
    try:
        q = Decimal(repr(x)).quantize(Decimal(1).scaleb(-digits), rounding=mode)
        return checked_number(float(q))
    except (InvalidOperation, OverflowError):
        return ErrorKind.NUM


def _round_kernel(args: list[Arg]) -> Value:
    n = to_number(args[0])
    if is_error(n):
        return n
    digits = _digits_arg(args[1])
    if is_error(digits):
        return digits
    return _quantize(n, digits, ROUND_HALF_UP)


def _trunc_kernel(args: list[Arg]) -> Value:
    n = to_number(args[0])
    if is_error(n):
        return n
    digits = _digits_arg(args[1]) if len(args) > 1 else 0
    if is_error(digits):
        return digits
    return _quantize(n, digits, ROUND_DOWN)


def _power_kernel(args: list[Arg]) -> Value:
    base = to_number(args[0])
    if is_error(base):
        return base
    exponent = to_number(args[1])
    if is_error(exponent):
        return exponent
    return number_power(base, exponent)


def _mod_kernel(args: list[Arg]) -> Value:
    left = to_number(args[0])
    if is_error(left):
        return left
    right = to_number(args[1])
    if is_error(right):
        return right
    return number_mod(left, right)


def _strict(name, lo, hi, kernel, range_aware=False) -> FunctionSpec:
    return FunctionSpec(name, lo, hi, "strict", kernel, range_aware)


_BUILTINS: dict[str, FunctionSpec] = {
    spec.name: spec
    for spec in [
        _strict("SUM", 1, None, _sum_kernel, range_aware=True),
        _strict("AVERAGE", 1, None, _average_kernel, range_aware=True),
        _strict("MIN", 1, None, _min_kernel, range_aware=True),
        _strict("MAX", 1, None, _max_kernel, range_aware=True),
        _strict("COUNT", 1, None, _count_kernel, range_aware=True),
        FunctionSpec("IF", 3, 3, "selective", _if_kernel),
        _strict("AND", 1, None, _and_kernel),
        _strict("OR", 1, None, _or_kernel),
        _strict("NOT", 1, 1, _not_kernel),
        _strict("TRUE", 0, 0, lambda args: True),
        _strict("FALSE", 0, 0, lambda args: False),
        _strict("SIN", 1, 1, _numeric_1(math.sin)),
        _strict("COS", 1, 1, _numeric_1(math.cos)),
        _strict("TAN", 1, 1, _numeric_1(math.tan)),
        _strict("SQRT", 1, 1, _numeric_1(math.sqrt)),
        _strict("ABS", 1, 1, _numeric_1(abs)),
        _strict("ROUND", 2, 2, _round_kernel),
        _strict("TRUNC", 1, 2, _trunc_kernel),
        _strict("PI", 0, 0, lambda args: math.pi),
        _strict("POWER", 2, 2, _power_kernel),
        _strict("MOD", 2, 2, _mod_kernel),
    ]
}


def builtin_registry() -> dict[str, FunctionSpec]:
    """The shared name -> FunctionSpec mapping. Treat as read-only."""
    return _BUILTINS
