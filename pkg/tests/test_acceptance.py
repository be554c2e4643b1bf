"""Acceptance gate: one test per release criterion, each printing a
PASS/FAIL line. Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import random
import struct
import time
import xml.etree.ElementTree as ET

import pytest

from equus import ast
from equus.addresses import CellAddress, format_address
from equus.ast import Binary, BinaryOp, NumberLit, Unary, UnaryOp, unparse
from equus.cli import main as cli_main
from equus.evaluate import EvalContext, evaluate
from equus.functions import builtin_registry, call_function
from equus.layout import layout
from equus.lexer import ParseError
from equus.ops import apply_binary, apply_unary
from equus.parser import parse
from equus.render import to_svg
from equus.sheet import LiteralCell, Sheet
from equus.values import ErrorKind, is_error

from generators import (
    fixture_resolve,
    random_error_seeded_expr,
    random_expr,
)
from naive_eval import naive_eval


def report(name: str):
    print(f"ACCEPTANCE PASS: {name}")


def test_motivating_case_exact_and_fast():
    expr = parse("=2+3*4")
    expected_shape = Binary(
        BinaryOp.ADD,
        NumberLit("2", 2.0),
        Binary(BinaryOp.MULTIPLY, NumberLit("3", 3.0), NumberLit("4", 4.0)),
    )
    assert expr == expected_shape
    tree = evaluate(expr)
    assert tree.value == 14.0
    assert tree.children[1].value == 12.0

    parse("=1")  # warm every code path before timing
    evaluate(parse("=2+3*4"))
    best = min(
        _timed(lambda: evaluate(parse("=2+3*4")))
        for _ in range(5)
    )
    assert best < 0.001, f"parse+evaluate took {best * 1e3:.3f} ms"
    report(f"motivating case =2+3*4 (root 14, multiply 12, {best * 1e6:.0f} µs)")


def _timed(fn) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def test_error_chain_codes_and_origin():
    assert evaluate(parse("=1/0")).value is ErrorKind.DIV0
    assert evaluate(parse("=TAN(1/0)")).value is ErrorKind.DIV0
    tree = evaluate(parse("=TAN(1/0)+SIN(40/3)"))
    assert tree.value is ErrorKind.DIV0
    origins = [n for n in tree.walk() if n.is_error_origin]
    divide = tree.children[0].children[0]
    assert origins == [divide]
    assert divide.expr.op is BinaryOp.DIVIDE
    sin_subtree = tree.children[1]
    assert not any(is_error(n.value) for n in sin_subtree.walk())
    assert ErrorKind.DIV0.value == "#DIV/0!"
    report("error chain =1/0, =TAN(1/0), =TAN(1/0)+SIN(40/3) with single origin")


def test_round_trip_1000_random_trees_under_10s():
    rng = random.Random(20_24)
    start = time.perf_counter()
    for i in range(1000):
        tree = random_expr(rng, depth=6, allow_misused_range=True)
        assert parse(unparse(tree)) == tree, unparse(tree)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    report(f"round-trip on 1000 random trees in {elapsed:.2f}s")


def _bits(x: float) -> bytes:
    return struct.pack("<d", x)


def test_differential_oracle_1000_formulae():
    rng = random.Random(4_2)
    ctx = EvalContext(resolve=fixture_resolve)
    checked = 0
    while checked < 1000:
        tree = random_expr(rng, depth=5, allow_misused_range=True)
        reference = naive_eval(tree, fixture_resolve)
        if isinstance(reference, list):
            continue  # a bare range has no scalar result to compare
        ours = evaluate(tree, ctx).value
        if isinstance(ours, float) and not isinstance(ours, bool):
            assert type(reference) is float and _bits(ours) == _bits(reference), unparse(tree)
        else:
            assert type(ours) is type(reference) and ours == reference, unparse(tree)
        checked += 1
    report(f"differential oracle agreement on {checked} random formulae (bit-exact numbers)")


def test_strict_propagation_exhaustive():
    cases = 0
    planted = ErrorKind.NULL
    for op in BinaryOp:
        assert apply_binary(op, planted, 1.0) is planted
        assert apply_binary(op, 1.0, planted) is planted
        assert apply_binary(op, planted, ErrorKind.NA) is planted  # left bias
        cases += 3
    for op in UnaryOp:
        assert apply_unary(op, planted) is planted
        cases += 1
    for name, spec in sorted(builtin_registry().items()):
        if spec.strictness != "strict" or spec.arity_max == 0:
            continue
        width = 3 if spec.arity_max is None else spec.arity_max
        width = max(width, spec.arity_min)
        for position in range(width):
            args = [1.0] * width
            args[position] = planted
            assert call_function(spec, args) is planted, (name, position)
            cases += 1
    report(f"strict propagation, exhaustive over {cases} operator/function positions")


def test_annotation_and_origin_invariants_500_trees():
    rng = random.Random(7_7)
    ctx = EvalContext(resolve=fixture_resolve)
    for _ in range(500):
        tree = evaluate(random_error_seeded_expr(rng, depth=4), ctx)
        for node in tree.walk():
            assert isinstance(node.value, (float, bool, str, ErrorKind, type(None)))
            if isinstance(node.value, float):
                import math

                assert math.isfinite(node.value)
            if node.children:
                assert node.value is not None
            derived_origin = is_error(node.value) and not any(
                c.value == node.value for c in node.children
            )
            assert node.is_error_origin == derived_origin
        if is_error(tree.value):
            assert _origin_reachable(tree, tree.value)
    report("annotation totality and error-origin path invariants on 500 seeded trees")


def _origin_reachable(node, kind) -> bool:
    if node.value != kind:
        return False
    if node.is_error_origin:
        return True
    return any(_origin_reachable(c, kind) for c in node.children)


def test_layout_invariants_500_trees_under_30s():
    rng = random.Random(3_14)
    ctx = EvalContext(resolve=fixture_resolve)
    start = time.perf_counter()
    for _ in range(500):
        tree = evaluate(random_expr(rng, depth=6, allow_misused_range=True), ctx)
        graph = layout(tree)
        node_count = sum(1 for _ in tree.walk())
        assert len(graph.nodes) == node_count + 1
        assert len(graph.edges) == node_count
        by_id = {n.id: n for n in graph.nodes}
        assert len(by_id) == len(graph.nodes)
        for edge in graph.edges:
            src, dst = by_id[edge.src], by_id[edge.dst]
            assert src.x + src.w < dst.x
        nodes = graph.nodes
        for i, a in enumerate(nodes):
            for b in nodes[i + 1 :]:
                overlap = (
                    a.x < b.x + b.w and b.x < a.x + a.w
                    and a.y < b.y + b.h and b.y < a.y + a.h
                )
                assert not overlap, (a.id, b.id)
        assert to_svg(graph) == to_svg(layout(tree))
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    report(f"layout invariants and byte-deterministic SVG on 500 trees in {elapsed:.2f}s")


def test_sheet_cycles_and_topological_oracle():
    sheet = Sheet()
    sheet.set_cell("A1", "=B1")
    sheet.set_cell("B1", "=A1")
    assert sheet.resolve("A1") is ErrorKind.REF
    assert sheet.resolve("B1") is ErrorKind.REF

    rng = random.Random(5_05)
    for _ in range(10):
        sheet, order = _random_dag_sheet(rng, 50)
        oracle: dict = {}
        for addr in order:
            content = sheet.get(addr)
            if content is None:
                continue
            if isinstance(content, LiteralCell):
                oracle[addr.key] = content.value
            else:
                oracle[addr.key] = naive_eval(content.expr, lambda a: oracle.get(a.key))
        for addr in order:
            if addr.key in oracle:
                ours = sheet.resolve(addr)
                expected = oracle[addr.key]
                if isinstance(ours, float) and not isinstance(ours, bool):
                    assert _bits(ours) == _bits(expected), format_address(addr)
                else:
                    assert type(ours) is type(expected) and ours == expected
    report("sheet cycle pair both #REF!; 10 random 50-cell DAG sheets match topological oracle")


def _random_dag_sheet(rng: random.Random, count: int):
    addresses = [CellAddress((i % 5) + 1, (i // 5) + 1) for i in range(count)]
    sheet = Sheet()
    for i, addr in enumerate(addresses):
        if i == 0 or rng.random() < 0.3:
            sheet.set_cell(addr, rng.choice(["1", "2.5", "-3", "TRUE", "x", "7"]))
            continue
        a = ast.CellRef(addresses[rng.randrange(i)])
        b = ast.CellRef(addresses[rng.randrange(i)])
        op = rng.choice([BinaryOp.ADD, BinaryOp.SUBTRACT, BinaryOp.MULTIPLY, BinaryOp.DIVIDE])
        roll = rng.random()
        if roll < 0.6:
            expr = Binary(op, a, b)
        elif roll < 0.8:
            expr = ast.Call("SUM", (a, b))
        else:
            expr = ast.Call("IF", (ast.BoolLit(rng.random() < 0.5), a, b))
        sheet.set_cell(addr, unparse(expr))
    return sheet, addresses


EXPECTED_SVG_FOR_7 = """<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="98" height="56" viewBox="0 0 98 56" font-family="ui-monospace, Menlo, Consolas, monospace">
<path d="M 25 28 L 73 28" fill="none" stroke="#9aa5b1" stroke-width="1.5"/>
<g class="node literal normal">
<title>7</title>
<rect x="7" y="15" width="18" height="26" rx="6" fill="#f5f7fa" stroke="#52606d" stroke-width="1.5"/>
<text x="16" y="31.72" text-anchor="middle" fill="#1f2933" font-size="12">7</text>
</g>
<g class="node result normal">
<title>=</title>
<rect x="73" y="7" width="18" height="42" rx="21" fill="#f5f7fa" stroke="#52606d" stroke-width="1.5"/>
<text x="82" y="25" text-anchor="middle" fill="#1f2933" font-size="12">=</text>
<text x="82" y="38.44" text-anchor="middle" fill="#1f2933" font-size="12" font-weight="bold">7</text>
</g>
</svg>
"""


def test_cli_golden(capsys, tmp_path):
    def run(*argv):
        code = cli_main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    assert run("parse", "=a1") == (0, "=A1\n", "")
    assert run("parse", "=2+3*4", "--ast") == (
        0,
        "add\n  number 2\n  multiply\n    number 3\n    number 4\n",
        "",
    )
    code, out, err = run("parse", "=2+")
    assert (code, out) == (2, "")
    assert err == "parse error at position 3: unexpected end of formula\n  =2+\n     ^\n"

    assert run("eval", "=2+3*4") == (0, "14\n", "")
    assert run("eval", "=TAN(1/0)+SIN(40/3)") == (0, "#DIV/0!\n", "")
    assert run("eval", "=2+3*4", "--trace") == (
        0,
        "2+12 → 14\n  2 → 2\n  3*4 → 12\n    3 → 3\n    4 → 4\n",
        "",
    )

    sheet_path = tmp_path / "s.tsv"
    sheet_path.write_text("A1\t5\nB1\t=A1*2\n", encoding="utf-8")
    assert run("eval", "--sheet", str(sheet_path), "--cell", "B1") == (0, "10\n", "")

    code, out, err = run("eval", "--sheet", str(tmp_path / "missing.tsv"), "--cell", "A1")
    assert (code, out) == (3, "")
    assert "not found" in err

    assert run("viz", "=7") == (0, EXPECTED_SVG_FOR_7, "")

    code, out, err = run("viz", "")
    assert code == 2

    report("CLI golden outputs for parse/eval/viz with exit codes 0/2/3")
