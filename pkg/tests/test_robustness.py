"""Hostile-input and stress properties: nothing in the pipeline may blow
up with anything other than its declared error type."""

import random
import string
import xml.etree.ElementTree as ET

from hypothesis import given, settings, strategies as st

from equus import ast
from equus.addresses import CellAddress, format_address
from equus.evaluate import EvalContext, evaluate
from equus.layout import layout
from equus.lexer import ParseError, tokenize
from equus.parser import parse
from equus.render import from_json, to_json, to_svg
from equus.sheet import FormulaCell, LiteralCell, Sheet
from equus.values import ErrorKind

from generators import fixture_resolve, random_expr
from naive_eval import naive_eval

GARBAGE_ALPHABET = string.printable + "é€𝄞$:%^&()\"'\\"


@settings(max_examples=300)
@given(st.text(alphabet=GARBAGE_ALPHABET, max_size=40))
def test_tokenizer_never_raises_anything_but_parse_error(source):
    try:
        tokens = tokenize(source)
    except ParseError as err:
        assert 0 <= err.position <= len(source.encode("utf-8"))
        return
    data = source.encode("utf-8")
    for token in tokens:
        assert data[token.offset : token.offset + token.length] == token.lexeme.encode("utf-8")


@settings(max_examples=300)
@given(st.text(alphabet=GARBAGE_ALPHABET, max_size=40))
def test_parser_never_raises_anything_but_parse_error(source):
    try:
        expr = parse(source)
    except ParseError as err:
        assert 0 <= err.position <= len(source.encode("utf-8"))
        return
    assert isinstance(expr, ast.Expr)


@settings(max_examples=150)
@given(st.text(max_size=30))
def test_arbitrary_unicode_text_literals_round_trip(value):
    expr = ast.Binary(ast.BinaryOp.CONCAT, ast.TextLit(value), ast.TextLit("x"))
    assert parse(ast.unparse(expr)) == expr


def test_full_pipeline_with_astral_plane_text():
    source = '="𝄞 clef"&" 🎼"'
    expr = parse(source)
    assert parse(ast.unparse(expr)) == expr
    tree = evaluate(expr)
    assert tree.value == "𝄞 clef 🎼"
    graph = layout(tree)
    svg = to_svg(graph)
    ET.fromstring(svg)
    assert from_json(to_json(graph)) == graph


def test_evaluator_never_raises_on_random_trees():
    rng = random.Random(61)
    ctx = EvalContext(resolve=fixture_resolve)
    for _ in range(500):
        tree = evaluate(random_expr(rng, 6, allow_misused_range=True), ctx)
        assert isinstance(tree.value, (float, bool, str, ErrorKind, type(None)))


def _reference_edges(sheet: Sheet):
    edges = {}
    for key, content in sheet.cells.items():
        if not isinstance(content, FormulaCell):
            continue
        deps = set()

        def visit(e):
            if isinstance(e, ast.CellRef):
                deps.add(e.address.key)
            elif isinstance(e, ast.RangeRef):
                for row in range(e.start.row, e.end.row + 1):
                    for col in range(e.start.column, e.end.column + 1):
                        deps.add((col, row))
            else:
                for child in ast.children(e):
                    visit(child)

        visit(content.expr)
        edges[key] = deps
    return edges


def _cycle_members_oracle(sheet: Sheet):
    """A cell is on a cycle iff it can reach itself via one or more
    reference edges (breadth-first search, formula cells only)."""
    edges = _reference_edges(sheet)
    members = set()
    for start in edges:
        frontier = set(edges[start])
        seen = set()
        while frontier:
            node = frontier.pop()
            if node == start:
                members.add(start)
                break
            if node in seen or node not in edges:
                continue
            seen.add(node)
            frontier.update(edges[node])
    return members


def _oracle_resolve_factory(sheet: Sheet, cyclic, memo):
    def resolve(addr):
        key = addr.key if hasattr(addr, "key") else addr
        if key in cyclic:
            return ErrorKind.REF
        if key in memo:
            return memo[key]
        content = sheet.cells.get(key)
        if content is None:
            value = None
        elif isinstance(content, LiteralCell):
            value = content.value
        else:
            value = naive_eval(content.expr, resolve)
        memo[key] = value
        return value

    return resolve


def _random_cyclic_sheet(rng: random.Random, count: int = 30) -> Sheet:
    addresses = [CellAddress((i % 6) + 1, (i // 6) + 1) for i in range(count)]
    sheet = Sheet()
    for addr in addresses:
        roll = rng.random()
        if roll < 0.25:
            sheet.set_cell(addr, rng.choice(["1", "2.5", "7", "TRUE"]))
            continue
        # references may point anywhere, cycles included
        a = ast.CellRef(rng.choice(addresses))
        b = ast.CellRef(rng.choice(addresses))
        if roll < 0.75:
            op = rng.choice([ast.BinaryOp.ADD, ast.BinaryOp.MULTIPLY, ast.BinaryOp.SUBTRACT])
            expr = ast.Binary(op, a, b)
        elif roll < 0.9:
            expr = ast.Call("SUM", (a, b))
        else:
            expr = ast.Call("IF", (ast.BoolLit(rng.random() < 0.5), a, b))
        sheet.set_cell(addr, ast.unparse(expr))
    return sheet


def test_cyclic_sheets_match_independent_oracle():
    rng = random.Random(73)
    for _ in range(25):
        sheet = _random_cyclic_sheet(rng)
        cyclic = _cycle_members_oracle(sheet)
        for key in cyclic:
            assert sheet.resolve(CellAddress(*key)) is ErrorKind.REF
        memo = {}
        oracle = _oracle_resolve_factory(sheet, cyclic, memo)
        for key in sheet.cells:
            addr = CellAddress(*key)
            expected = oracle(addr)
            actual = sheet.resolve(addr)
            assert type(actual) is type(expected) and actual == expected, format_address(addr)


def test_resolution_terminates_on_dense_cycles():
    sheet = Sheet()
    size = 40
    for i in range(size):
        target = format_address(CellAddress(((i + 1) % size) + 1, 1))
        sheet.set_cell(CellAddress(i + 1, 1), f"={target}+1")
    for i in range(size):
        assert sheet.resolve(CellAddress(i + 1, 1)) is ErrorKind.REF


def test_deep_formula_chain_resolves():
    sheet = Sheet()
    sheet.set_cell("A1", "1")
    for row in range(2, 120):
        sheet.set_cell(CellAddress(1, row), f"=A{row - 1}+1")
    assert sheet.resolve(CellAddress(1, 119)) == 119.0


def test_diamond_dependencies_are_memoized_not_exponential():
    sheet = Sheet()
    sheet.set_cell("A1", "1")
    for row in range(2, 40):
        prev = f"A{row - 1}"
        sheet.set_cell(CellAddress(1, row), f"={prev}+{prev}")
    assert sheet.resolve(CellAddress(1, 39)) == float(2 ** 38)
