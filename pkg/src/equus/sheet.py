"""A sparse grid of literals and formulae.

Resolution is recomputed on demand (no recalculation engine): each
``resolve``/``context`` call takes a consistent snapshot, memoizing cell
values for its own duration. Reference cycles are detected on the
syntactic dependency graph, and every cell on a cycle resolves to #REF!,
so the problem is visible instead of silently showing a zero.

Sheet files are UTF-8 text with one ``ADDRESS<TAB>raw-content`` line per
cell (LF endings). Content is stored verbatim, so saving and loading
round-trips exactly; cell content containing a newline cannot be
represented and is rejected on save.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from . import ast
from .addresses import AddressError, CellAddress, format_address, parse_address
from .evaluate import EvalContext, evaluate
from .lexer import ParseError
from .parser import parse
from .values import EMPTY, ErrorKind, Value, parse_number_text

log = logging.getLogger(__name__)

Key = tuple[int, int]  # (column, row)


@dataclass(frozen=True)
class LiteralCell:
    raw: str
    value: Value  # float, str, or bool


@dataclass(frozen=True)
class FormulaCell:
    raw: str
    expr: ast.Expr


CellContent = LiteralCell | FormulaCell


def _as_address(addr: CellAddress | str) -> CellAddress:
    return parse_address(addr) if isinstance(addr, str) else addr


def classify_literal(raw: str) -> Value:
    number = parse_number_text(raw)
    if number is not None:
        return number
    stripped = raw.strip().upper()
    if stripped == "TRUE":
        return True
    if stripped == "FALSE":
        return False
    return raw


@dataclass
class Sheet:
    cells: dict[Key, CellContent] = field(default_factory=dict)

    def set_cell(self, addr: CellAddress | str, raw: str) -> None:
        """Store raw text at an address.

        Leading "=" means a formula, which is parsed now; a ParseError
        propagates and leaves the sheet unchanged. Empty text clears the
        cell. Anything else is stored as a number, boolean, or text
        literal.
        """
        key = _as_address(addr).key
        if raw == "":
            self.cells.pop(key, None)
            return
        if raw.startswith("="):
            expr = parse(raw)  # may raise ParseError; nothing stored
            self.cells[key] = FormulaCell(raw, expr)
            return
        self.cells[key] = LiteralCell(raw, classify_literal(raw))

    def get(self, addr: CellAddress | str) -> CellContent | None:
        return self.cells.get(_as_address(addr).key)

    def resolve(self, addr: CellAddress | str) -> Value:
        """The display value of a cell: Empty for blanks, the literal, or
        the formula's result with references resolved recursively."""
        key = _as_address(addr).key
        return self._resolve_key(key, {}, self._cells_on_cycles())

    def context(self) -> EvalContext:
        """An EvalContext over this sheet's current state.

        The context snapshots cycle information and memoizes values for
        its lifetime; build a fresh one after mutating the sheet.
        """
        memo: dict[Key, Value] = {}
        cyclic = self._cells_on_cycles()

        def resolve(a: CellAddress) -> Value:
            return self._resolve_key(a.key, memo, cyclic)

        return EvalContext(resolve=resolve)

    def expand_range(self, r: ast.RangeRef) -> list[tuple[CellAddress, Value]]:
        """Resolve every cell in the rectangle, row-major."""
        memo: dict[Key, Value] = {}
        cyclic = self._cells_on_cycles()
        out = []
        for row in range(r.start.row, r.end.row + 1):
            for col in range(r.start.column, r.end.column + 1):
                a = CellAddress(col, row)
                out.append((a, self._resolve_key(a.key, memo, cyclic)))
        return out

    def _resolve_key(self, key: Key, memo: dict[Key, Value], cyclic: set[Key]) -> Value:
        if key in cyclic:
            return ErrorKind.REF
        if key in memo:
            return memo[key]
        content = self.cells.get(key)
        if content is None:
            value: Value = EMPTY
        elif isinstance(content, LiteralCell):
            value = content.value
        else:
            ctx = EvalContext(resolve=lambda a: self._resolve_key(a.key, memo, cyclic))
            value = evaluate(content.expr, ctx).value
        memo[key] = value
        return value

    def _dependencies(self, expr: ast.Expr) -> set[Key]:
        """Formula cells this expression refers to (range references only
        contribute cells that actually hold formulae; others are inert)."""
        deps: set[Key] = set()
        formula_keys = [k for k, c in self.cells.items() if isinstance(c, FormulaCell)]

        def visit(e: ast.Expr) -> None:
            if isinstance(e, ast.CellRef):
                deps.add(e.address.key)
            elif isinstance(e, ast.RangeRef):
                for k in formula_keys:
                    col, row = k
                    if (
                        e.start.column <= col <= e.end.column
                        and e.start.row <= row <= e.end.row
                    ):
                        deps.add(k)
            else:
                for child in ast.children(e):
                    visit(child)

        visit(expr)
        return deps

    def _cells_on_cycles(self) -> set[Key]:
        """Keys of formula cells lying on a reference cycle (Tarjan SCC,
        iterative). A self-reference counts as a cycle."""
        graph: dict[Key, list[Key]] = {}
        for key, content in self.cells.items():
            if isinstance(content, FormulaCell):
                graph[key] = sorted(self._dependencies(content.expr))

        index: dict[Key, int] = {}
        lowlink: dict[Key, int] = {}
        on_stack: set[Key] = set()
        stack: list[Key] = []
        counter = 0
        cyclic: set[Key] = set()

        for start in graph:
            if start in index:
                continue
            work: list[tuple[Key, int]] = [(start, 0)]
            while work:
                node, child_i = work[-1]
                if child_i == 0:
                    index[node] = lowlink[node] = counter
                    counter += 1
                    stack.append(node)
                    on_stack.add(node)
                advanced = False
                children = graph.get(node, [])
                for i in range(child_i, len(children)):
                    child = children[i]
                    if child not in graph:
                        continue  # literal or blank: no outgoing edges
                    if child not in index:
                        work[-1] = (node, i + 1)
                        work.append((child, 0))
                        advanced = True
                        break
                    if child in on_stack:
                        lowlink[node] = min(lowlink[node], index[child])
                if advanced:
                    continue
                work.pop()
                if lowlink[node] == index[node]:
                    component = []
                    while True:
                        member = stack.pop()
                        on_stack.discard(member)
                        component.append(member)
                        if member == node:
                            break
                    if len(component) > 1 or node in graph.get(node, []):
                        cyclic.update(component)
                if work:
                    parent = work[-1][0]
                    lowlink[parent] = min(lowlink[parent], lowlink[node])
        return cyclic


def save_sheet(sheet: Sheet, path: str | Path) -> None:
    lines = []
    for (col, row) in sorted(sheet.cells, key=lambda k: (k[1], k[0])):
        content = sheet.cells[(col, row)]
        if "\n" in content.raw or "\r" in content.raw:
            raise ValueError(
                f"cell {format_address(CellAddress(col, row))} contains a line break; "
                "not representable in the sheet file format"
            )
        lines.append(f"{format_address(CellAddress(col, row))}\t{content.raw}\n")
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_sheet(path: str | Path) -> Sheet:
    """Read a sheet file. Cells that fail to parse are skipped with a
    logged warning; I/O errors propagate."""
    sheet = Sheet()
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        addr_text, sep, raw = line.partition("\t")
        if not sep:
            log.warning("%s:%d: no tab separator; line skipped", path, line_no)
            continue
        try:
            sheet.set_cell(parse_address(addr_text), raw)
        except AddressError:
            log.warning("%s:%d: bad address %r; line skipped", path, line_no, addr_text)
        except ParseError as err:
            log.warning("%s:%d: %s: %s; cell skipped", path, line_no, addr_text, err.message)
    return sheet
