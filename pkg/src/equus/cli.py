"""Command-line interface: parse, evaluate, visualize, serve.

Exit codes: 0 success, 2 formula/usage error (parse diagnostics go to
stderr with a caret), 3 missing sheet file, 4 port unavailable.
"""

from __future__ import annotations

import argparse
import socket
import sys
from pathlib import Path

from . import ast
from .addresses import AddressError, parse_address
from .evaluate import AnnotatedNode, EvalContext, evaluate
from .layout import layout, range_preview
from .lexer import ParseError
from .parser import parse
from .render import to_json, to_svg
from .sheet import FormulaCell, Sheet, load_sheet
from .values import format_value

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MISSING_FILE = 3
EXIT_PORT = 4


def normalize_formula(text: str) -> str:
    return text if text.lstrip().startswith("=") else "=" + text


def _byte_to_char(source: str, byte_offset: int) -> int:
    count = 0
    chars = 0
    for ch in source:
        if count >= byte_offset:
            break
        count += len(ch.encode("utf-8"))
        chars += 1
    return chars


def print_diagnostic(source: str, err: ParseError, out=None) -> None:
    out = out or sys.stderr
    print(f"parse error at position {err.position}: {err.message}", file=out)
    print(f"  {source}", file=out)
    print("  " + " " * _byte_to_char(source, err.position) + "^", file=out)


_AST_NAMES = {
    ast.UnaryOp.NEGATE: "negate",
    ast.UnaryOp.PLUS: "plus",
    ast.UnaryOp.PERCENT: "percent",
    ast.BinaryOp.ADD: "add",
    ast.BinaryOp.SUBTRACT: "subtract",
    ast.BinaryOp.MULTIPLY: "multiply",
    ast.BinaryOp.DIVIDE: "divide",
    ast.BinaryOp.POWER: "power",
    ast.BinaryOp.CONCAT: "concat",
    ast.BinaryOp.EQ: "eq",
    ast.BinaryOp.NEQ: "neq",
    ast.BinaryOp.LT: "lt",
    ast.BinaryOp.GT: "gt",
    ast.BinaryOp.LE: "le",
    ast.BinaryOp.GE: "ge",
}


def dump_ast(e: ast.Expr, depth: int = 0) -> list[str]:
    pad = "  " * depth
    if isinstance(e, ast.NumberLit):
        return [f"{pad}number {e.text}"]
    if isinstance(e, ast.TextLit):
        return [f"{pad}text {ast.unparse(e)[1:]}"]
    if isinstance(e, ast.BoolLit):
        return [f"{pad}boolean {'TRUE' if e.value else 'FALSE'}"]
    if isinstance(e, ast.CellRef):
        return [f"{pad}cell {ast.unparse(e)[1:]}"]
    if isinstance(e, ast.RangeRef):
        return [f"{pad}range {ast.unparse(e)[1:]}"]
    if isinstance(e, ast.Unary):
        return [f"{pad}{_AST_NAMES[e.op]}"] + dump_ast(e.operand, depth + 1)
    if isinstance(e, ast.Binary):
        return (
            [f"{pad}{_AST_NAMES[e.op]}"]
            + dump_ast(e.left, depth + 1)
            + dump_ast(e.right, depth + 1)
        )
    if isinstance(e, ast.Call):
        lines = [f"{pad}call {e.name}"]
        for arg in e.args:
            lines.extend(dump_ast(arg, depth + 1))
        return lines
    raise TypeError(f"not an Expr: {e!r}")


def _trace_operand(node: AnnotatedNode) -> str:
    if isinstance(node.expr, ast.RangeRef) and node.entries is not None:
        return range_preview(node.entries, 5)
    return format_value(node.value)


def _trace_label(node: AnnotatedNode) -> str:
    e = node.expr
    if isinstance(e, (ast.NumberLit, ast.TextLit, ast.BoolLit)):
        return ast.unparse(e)[1:]
    if isinstance(e, (ast.CellRef, ast.RangeRef)):
        return ast.unparse(e)[1:]
    if isinstance(e, ast.Unary):
        inner = _trace_operand(node.children[0])
        return inner + "%" if e.op is ast.UnaryOp.PERCENT else e.op.value + inner
    if isinstance(e, ast.Binary):
        return _trace_operand(node.children[0]) + e.op.value + _trace_operand(node.children[1])
    return f"{e.name}({','.join(_trace_operand(c) for c in node.children)})"


def trace_lines(node: AnnotatedNode, depth: int = 0) -> list[str]:
    lines = [f"{'  ' * depth}{_trace_label(node)} → {format_value(node.value)}"]
    for child in node.children:
        lines.extend(trace_lines(child, depth + 1))
    return lines


def _load_sheet_arg(path: str) -> Sheet:
    if not Path(path).is_file():
        print(f"error: sheet file not found: {path}", file=sys.stderr)
        raise SystemExit(EXIT_MISSING_FILE)
    return load_sheet(path)


def _require_formula_source(args, parser: argparse.ArgumentParser) -> tuple[str, Sheet]:
    """Resolve (formula text, sheet) from positional/--sheet/--cell flags."""
    sheet = _load_sheet_arg(args.sheet) if args.sheet else Sheet()
    if args.cell:
        if not args.sheet:
            parser.error("--cell requires --sheet")
        try:
            addr = parse_address(args.cell)
        except AddressError as err:
            print(f"error: {err}", file=sys.stderr)
            raise SystemExit(EXIT_PARSE)
        content = sheet.get(addr)
        if not isinstance(content, FormulaCell):
            print(f"error: cell {args.cell.upper()} holds no formula", file=sys.stderr)
            raise SystemExit(EXIT_PARSE)
        return content.raw, sheet
    if args.formula is None:
        parser.error("a formula or --sheet/--cell is required")
    return normalize_formula(args.formula), sheet


def cmd_parse(args, _parser) -> int:
    source = normalize_formula(args.formula)
    try:
        expr = parse(source)
    except ParseError as err:
        print_diagnostic(source, err)
        return EXIT_PARSE
    if args.ast:
        print("\n".join(dump_ast(expr)))
    else:
        print(ast.unparse(expr))
    return EXIT_OK


def cmd_eval(args, parser) -> int:
    if args.cell and args.sheet and not args.trace:
        sheet = _load_sheet_arg(args.sheet)
        try:
            addr = parse_address(args.cell)
        except AddressError as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_PARSE
        print(format_value(sheet.resolve(addr)))
        return EXIT_OK
    source, sheet = _require_formula_source(args, parser)
    try:
        expr = parse(source)
    except ParseError as err:
        print_diagnostic(source, err)
        return EXIT_PARSE
    tree = evaluate(expr, sheet.context())
    if args.trace:
        print("\n".join(trace_lines(tree)))
    else:
        print(format_value(tree.value))
    return EXIT_OK


def cmd_viz(args, parser) -> int:
    source, sheet = _require_formula_source(args, parser)
    try:
        expr = parse(source)
    except ParseError as err:
        print_diagnostic(source, err)
        return EXIT_PARSE
    tree = evaluate(expr, sheet.context())
    graph = layout(tree)
    document = to_json(graph) if args.format == "json" else to_svg(graph)
    if args.out:
        Path(args.out).write_text(document, encoding="utf-8")
    else:
        sys.stdout.write(document)
    return EXIT_OK


def _port_available(host: str, port: int) -> bool:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as s:
        s.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            s.bind((host, port))
        except OSError:
            return False
    return True


def cmd_serve(args, _parser) -> int:
    import uvicorn

    from .service import create_app

    initial = _load_sheet_arg(args.sheet) if args.sheet else None
    if not _port_available(args.host, args.port):
        print(f"error: port {args.port} is unavailable", file=sys.stderr)
        return EXIT_PORT
    app = create_app(initial_sheet=initial)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    except OSError:
        print(f"error: port {args.port} is unavailable", file=sys.stderr)
        return EXIT_PORT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equus",
        description="Parse, evaluate, and visualize spreadsheet formulae.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_parse = sub.add_parser("parse", help="parse a formula and print its canonical form")
    p_parse.add_argument("formula")
    p_parse.add_argument("--ast", action="store_true", help="print the tree instead")
    p_parse.set_defaults(handler=cmd_parse)

    p_eval = sub.add_parser("eval", help="evaluate a formula or sheet cell")
    p_eval.add_argument("formula", nargs="?")
    p_eval.add_argument("--sheet", help="sheet file (ADDRESS<TAB>content lines)")
    p_eval.add_argument("--cell", help="cell address, requires --sheet")
    p_eval.add_argument("--trace", action="store_true", help="print every subexpression value")
    p_eval.set_defaults(handler=cmd_eval)

    p_viz = sub.add_parser("viz", help="render the dataflow visualization")
    p_viz.add_argument("formula", nargs="?")
    p_viz.add_argument("--sheet", help="sheet file")
    p_viz.add_argument("--cell", help="cell address, requires --sheet")
    p_viz.add_argument("--format", choices=("svg", "json"), default="svg")
    p_viz.add_argument("--out", help="write to a file instead of stdout")
    p_viz.set_defaults(handler=cmd_viz)

    p_serve = sub.add_parser("serve", help="run the HTTP service and UI")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--sheet", help="preload new sessions from this sheet file")
    p_serve.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args, parser)
    except SystemExit as exit_:  # argparse errors and helper bail-outs
        return exit_.code if isinstance(exit_.code, int) else EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
