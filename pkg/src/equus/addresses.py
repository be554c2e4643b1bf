"""A1-notation cell addresses.

Columns use bijective base-26 letters (A=1 .. Z=26, AA=27, ... ZZZ=18278);
rows are 1-based. A ``$`` before the column letters or the row digits marks
that component absolute.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

MAX_COLUMN = 18278  # ZZZ
_ADDRESS_RE = re.compile(r"^(\$?)([A-Za-z]{1,3})(\$?)([1-9][0-9]*)$")


class AddressError(ValueError):
    """Raised for text that is not a valid A1-notation address."""


@dataclass(frozen=True)
class CellAddress:
    column: int
    row: int
    column_absolute: bool = False
    row_absolute: bool = False

    def __post_init__(self) -> None:
        if not 1 <= self.column <= MAX_COLUMN:
            raise AddressError(f"column {self.column} out of range 1..{MAX_COLUMN}")
        if self.row < 1:
            raise AddressError(f"row {self.row} out of range (must be >= 1)")

    @property
    def key(self) -> tuple[int, int]:
        """Grid position, ignoring the absolute markers."""
        return (self.column, self.row)


def column_letters(column: int) -> str:
    if not 1 <= column <= MAX_COLUMN:
        raise AddressError(f"column {column} out of range 1..{MAX_COLUMN}")
    letters = ""
    n = column
    while n > 0:
        n, rem = divmod(n - 1, 26)
        letters = chr(ord("A") + rem) + letters
    return letters


def letters_to_column(letters: str) -> int:
    n = 0
    for ch in letters:
        n = n * 26 + (ord(ch.upper()) - ord("A") + 1)
    return n


def format_address(a: CellAddress) -> str:
    return "".join(
        [
            "$" if a.column_absolute else "",
            column_letters(a.column),
            "$" if a.row_absolute else "",
            str(a.row),
        ]
    )


def parse_address(text: str) -> CellAddress:
    m = _ADDRESS_RE.match(text)
    if not m:
        raise AddressError(f"not a cell address: {text!r}")
    col_abs, letters, row_abs, digits = m.groups()
    row = int(digits)
    if row < 1:
        raise AddressError(f"row 0 is not addressable: {text!r}")
    return CellAddress(
        column=letters_to_column(letters),
        row=row,
        column_absolute=bool(col_abs),
        row_absolute=bool(row_abs),
    )
