"""Formula tokenizer.

Tokens carry byte spans into the source so diagnostics and reassembly are
exact even for non-ASCII text literals. A leading "=" (after optional
whitespace) is consumed and never emitted as a token.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field


class TokenKind(enum.Enum):
    NUMBER = "number"
    TEXT = "text-literal"
    BOOL = "boolean-literal"
    CELL_REF = "cell-ref"
    IDENT = "identifier"
    OP = "operator"
    LPAREN = "left-paren"
    RPAREN = "right-paren"
    COMMA = "comma"
    COLON = "colon"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    offset: int  # byte offset into the source
    length: int  # byte length


class ParseError(Exception):
    """A formula that cannot be tokenized or parsed.

    ``position`` is a byte offset into the source text; ``expected`` names
    the token kinds that would have been accepted there.
    """

    def __init__(self, position: int, message: str, expected: list[str] | None = None):
        super().__init__(f"{message} (at position {position})")
        self.position = position
        self.message = message
        self.expected: list[str] = expected or []

    def to_dict(self) -> dict:
        return {
            "position": self.position,
            "message": self.message,
            "expected": list(self.expected),
        }


_WHITESPACE = " \t\r\n"
_NUMBER_RE = re.compile(r"(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?")
_CELL_RE = re.compile(r"\$?[A-Za-z]{1,3}\$?[1-9][0-9]*(?![0-9A-Za-z_.$])")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*")
_TWO_CHAR_OPS = ("<=", ">=", "<>")
_ONE_CHAR_OPS = "+-*/^&%=<>"


def tokenize(source: str) -> list[Token]:
    """Split formula text into tokens; raises ParseError on bad input."""
    tokens: list[Token] = []
    i = 0  # character index
    byte = 0  # byte offset of source[i]
    n = len(source)

    def advance(count: int) -> None:
        nonlocal i, byte
        byte += len(source[i : i + count].encode("utf-8"))
        i += count

    def emit(kind: TokenKind, lexeme: str) -> None:
        tokens.append(Token(kind, lexeme, byte, len(lexeme.encode("utf-8"))))
        advance(len(lexeme))

    # Skip leading whitespace and the optional "=".
    while i < n and source[i] in _WHITESPACE:
        advance(1)
    if i < n and source[i] == "=":
        advance(1)

    while i < n:
        ch = source[i]
        if ch in _WHITESPACE:
            advance(1)
            continue
        if ch == "(":
            emit(TokenKind.LPAREN, ch)
            continue
        if ch == ")":
            emit(TokenKind.RPAREN, ch)
            continue
        if ch == ",":
            emit(TokenKind.COMMA, ch)
            continue
        if ch == ":":
            emit(TokenKind.COLON, ch)
            continue
        if ch == '"':
            emit_text(source, i, byte, tokens)
            consumed = tokens[-1].lexeme
            advance(len(consumed))
            continue
        two = source[i : i + 2]
        if two in _TWO_CHAR_OPS:
            emit(TokenKind.OP, two)
            continue
        if ch in _ONE_CHAR_OPS:
            emit(TokenKind.OP, ch)
            continue
        if ch.isdigit() or ch == ".":
            m = _NUMBER_RE.match(source, i)
            if m:
                emit(TokenKind.NUMBER, m.group())
                continue
            raise ParseError(byte, f"unexpected character {ch!r}", ["number"])
        if ch == "$" or ch == "_" or ("A" <= ch <= "Z") or ("a" <= ch <= "z"):
            m = _CELL_RE.match(source, i)
            if m:
                emit(TokenKind.CELL_REF, m.group())
                continue
            if ch == "$":
                raise ParseError(byte, "malformed cell reference", ["cell-ref"])
            word = _IDENT_RE.match(source, i).group()
            if word.upper() in ("TRUE", "FALSE"):
                emit(TokenKind.BOOL, word)
            else:
                emit(TokenKind.IDENT, word)
            continue
        raise ParseError(byte, f"unexpected character {ch!r}", [])

    return tokens


def emit_text(source: str, i: int, byte: int, tokens: list[Token]) -> None:
    """Scan a double-quoted text literal with "" escaping. Appends the raw
    lexeme (quotes included); the caller advances past it."""
    j = i + 1
    n = len(source)
    while j < n:
        if source[j] == '"':
            if j + 1 < n and source[j + 1] == '"':
                j += 2
                continue
            lexeme = source[i : j + 1]
            tokens.append(Token(TokenKind.TEXT, lexeme, byte, len(lexeme.encode("utf-8"))))
            return
        j += 1
    raise ParseError(byte, "unterminated text literal", ["text-literal"])


def unescape_text(lexeme: str) -> str:
    return lexeme[1:-1].replace('""', '"')


def source_byte_length(source: str) -> int:
    return len(source.encode("utf-8"))
