"""The computation domain: numbers, booleans, text, blanks, and error codes.

Plain Python values stand in for the domain: ``float`` for numbers,
``bool`` for booleans, ``str`` for text, ``None`` for an unset cell, and
``ErrorKind`` members for the error codes. Numbers are kept finite
everywhere; any kernel that would produce a NaN or infinity returns
``ErrorKind.NUM`` instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union


class ErrorKind(enum.Enum):
    """The eight defined error codes. ``.value`` is the exact rendering."""

    DIV0 = "#DIV/0!"
    NA = "#N/A"
    NAME = "#NAME?"
    NULL = "#NULL!"
    NUM = "#NUM!"
    REF = "#REF!"
    VALUE = "#VALUE!"
    SPILL = "#SPILL!"

    def __repr__(self) -> str:
        return f"ErrorKind({self.value})"


Value = Union[float, bool, str, None, ErrorKind]

EMPTY: Value = None


@dataclass(frozen=True)
class RangeValues:
    """The expanded entries of a range argument, in row-major order.

    Not part of the scalar value domain: only the range-aware aggregate
    functions consume one; everywhere else it coerces to #VALUE!.
    """

    entries: tuple[Value, ...]


def is_error(v: Value) -> bool:
    return isinstance(v, ErrorKind)


def is_number(v: Value) -> bool:
    return isinstance(v, float) and not isinstance(v, bool)


def checked_number(x: float) -> Value:
    """Close the domain: non-finite arithmetic results become #NUM!."""
    if math.isfinite(x):
        return float(x)
    return ErrorKind.NUM


def format_number(v: float) -> str:
    """Shortest decimal form with at most 15 significant digits."""
    best: str | None = None
    for prec in range(1, 16):
        s = f"{v:.{prec}g}"
        if float(s) == v and (best is None or len(s) < len(best)):
            best = s
    return best if best is not None else f"{v:.15g}"


def format_value(v: Value) -> str:
    """Render a value the way the grid and the visualization display it."""
    if v is None:
        return ""
    if isinstance(v, ErrorKind):
        return v.value
    if isinstance(v, bool):
        return "TRUE" if v else "FALSE"
    if isinstance(v, float):
        return format_number(v)
    return v


def parse_number_text(s: str) -> float | None:
    """Parse text that looks like a number, else None.

    Rejects the ``inf``/``nan`` spellings float() would accept: the value
    domain has no non-finite numbers.
    """
    t = s.strip()
    if not t or t.lower().strip("+-") in ("inf", "infinity", "nan"):
        return None
    try:
        x = float(t)
    except ValueError:
        return None
    return x if math.isfinite(x) else None


def to_number(v: Value) -> Value:
    """Numeric coercion: booleans count as 0/1, numeric text parses,
    blanks are 0. Anything else is #VALUE!."""
    if isinstance(v, ErrorKind):
        return v
    if isinstance(v, bool):
        return 1.0 if v else 0.0
    if isinstance(v, float):
        return v
    if v is None:
        return 0.0
    if isinstance(v, str):
        x = parse_number_text(v)
        return x if x is not None else ErrorKind.VALUE
    return ErrorKind.VALUE


def to_text(v: Value) -> Value:
    if isinstance(v, ErrorKind):
        return v
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, float)) or v is None:
        return format_value(v)
    return ErrorKind.VALUE


def to_boolean(v: Value) -> Value:
    """Boolean coercion: nonzero numbers are TRUE, blanks FALSE, and the
    literal texts TRUE/FALSE (any case) convert. Anything else is #VALUE!."""
    if isinstance(v, ErrorKind):
        return v
    if isinstance(v, bool):
        return v
    if isinstance(v, float):
        return v != 0.0
    if v is None:
        return False
    if isinstance(v, str):
        u = v.strip().upper()
        if u == "TRUE":
            return True
        if u == "FALSE":
            return False
        return ErrorKind.VALUE
    return ErrorKind.VALUE
