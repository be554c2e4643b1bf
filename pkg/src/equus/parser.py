"""Precedence-climbing parser for formula text.

Grammar notes:
  - binding powers come from the table in :mod:`equus.ast`; every binary
    operator is left-associative,
  - prefix - and + bind tighter than ^,
  - % is a postfix operator,
  - a range is two cell references joined by ":" and binds tightest,
  - call arity is validated here against the function registry, so an
    expression that parses can always be evaluated.
"""

from __future__ import annotations

from . import ast
from .addresses import parse_address
from .functions import FunctionSpec, builtin_registry
from .lexer import ParseError, Token, TokenKind, source_byte_length, tokenize, unescape_text

_ATOM_EXPECTED = [
    "number",
    "text-literal",
    "boolean-literal",
    "cell-ref",
    "identifier",
    "left-paren",
    "operator",
]

_BINARY_BY_SYMBOL = {op.value: op for op in ast.BinaryOp}


class _Parser:
    def __init__(self, tokens: list[Token], end_position: int,
                 registry: dict[str, FunctionSpec]):
        self.tokens = tokens
        self.index = 0
        self.end_position = end_position
        self.registry = registry

    def peek(self) -> Token | None:
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return None

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, kind: TokenKind) -> Token:
        token = self.peek()
        if token is None or token.kind is not kind:
            position = token.offset if token else self.end_position
            raise ParseError(position, f"expected {kind.value}", [kind.value])
        return self.advance()

    def parse_expression(self, min_bp: int = 0) -> ast.Expr:
        left = self.parse_atom()
        while True:
            token = self.peek()
            if token is None or token.kind is not TokenKind.OP:
                break
            if token.lexeme == "%":
                if ast.PERCENT_BP < min_bp:
                    break
                self.advance()
                left = ast.Unary(ast.UnaryOp.PERCENT, left)
                continue
            op = _BINARY_BY_SYMBOL.get(token.lexeme)
            if op is None:
                raise ParseError(token.offset, f"unexpected operator {token.lexeme!r}", [])
            bp = ast.BINARY_BP[op]
            if bp < min_bp:
                break
            self.advance()
            right = self.parse_expression(bp + 1)  # left-associative
            left = ast.Binary(op, left, right)
        return left

    def parse_atom(self) -> ast.Expr:
        token = self.peek()
        if token is None:
            raise ParseError(self.end_position, "unexpected end of formula", _ATOM_EXPECTED)

        if token.kind is TokenKind.OP and token.lexeme in ("-", "+"):
            self.advance()
            operand = self.parse_expression(ast.PREFIX_BP)
            op = ast.UnaryOp.NEGATE if token.lexeme == "-" else ast.UnaryOp.PLUS
            return ast.Unary(op, operand)

        if token.kind is TokenKind.LPAREN:
            self.advance()
            inner = self.parse_expression(0)
            self.expect(TokenKind.RPAREN)
            return inner

        if token.kind is TokenKind.NUMBER:
            self.advance()
            return ast.NumberLit(token.lexeme, float(token.lexeme))

        if token.kind is TokenKind.TEXT:
            self.advance()
            return ast.TextLit(unescape_text(token.lexeme))

        if token.kind is TokenKind.BOOL:
            self.advance()
            if self._at_lparen():
                return self.parse_call(token)
            return ast.BoolLit(token.lexeme.upper() == "TRUE")

        if token.kind is TokenKind.CELL_REF:
            self.advance()
            if self._at_lparen():
                # A ref-shaped word used as a function name (e.g. LOG10(...)).
                return self.parse_call(token)
            start = parse_address(token.lexeme)
            nxt = self.peek()
            if nxt is not None and nxt.kind is TokenKind.COLON:
                self.advance()
                end_token = self.expect(TokenKind.CELL_REF)
                end = parse_address(end_token.lexeme)
                return ast.normalize_range(start, end)
            return ast.CellRef(start)

        if token.kind is TokenKind.IDENT:
            self.advance()
            if self._at_lparen():
                return self.parse_call(token)
            raise ParseError(
                token.offset,
                f"unknown name {token.lexeme!r} (cell references and function calls only)",
                ["cell-ref"],
            )

        raise ParseError(token.offset, f"unexpected {token.kind.value}", _ATOM_EXPECTED)

    def _at_lparen(self) -> bool:
        nxt = self.peek()
        return nxt is not None and nxt.kind is TokenKind.LPAREN

    def parse_call(self, name_token: Token) -> ast.Expr:
        name = name_token.lexeme.upper()
        spec = self.registry.get(name)
        if spec is None:
            raise ParseError(name_token.offset, f"unknown function {name!r}", ["identifier"])
        self.expect(TokenKind.LPAREN)
        args: list[ast.Expr] = []
        nxt = self.peek()
        if nxt is not None and nxt.kind is TokenKind.RPAREN:
            self.advance()
        else:
            args.append(self.parse_expression(0))
            while True:
                nxt = self.peek()
                if nxt is not None and nxt.kind is TokenKind.COMMA:
                    self.advance()
                    args.append(self.parse_expression(0))
                    continue
                self.expect(TokenKind.RPAREN)
                break
        if not spec.arity_ok(len(args)):
            if spec.arity_max is None:
                bound = f"at least {spec.arity_min}"
            elif spec.arity_min == spec.arity_max:
                bound = f"exactly {spec.arity_min}"
            else:
                bound = f"{spec.arity_min} to {spec.arity_max}"
            raise ParseError(
                name_token.offset,
                f"{name} takes {bound} arguments, got {len(args)}",
                [],
            )
        return ast.Call(name, tuple(args))


def parse(source: str, registry: dict[str, FunctionSpec] | None = None) -> ast.Expr:
    """Parse formula text (leading "=" optional) into an expression tree."""
    if registry is None:
        registry = builtin_registry()
    tokens = tokenize(source)
    end_position = source_byte_length(source)
    if not tokens:
        raise ParseError(end_position, "empty formula", _ATOM_EXPECTED)
    parser = _Parser(tokens, end_position, registry)
    expr = parser.parse_expression(0)
    trailing = parser.peek()
    if trailing is not None:
        raise ParseError(trailing.offset, f"unexpected {trailing.kind.value} after expression", [])
    return expr
