"""EQUUS: parse spreadsheet formulae, evaluate them with every
intermediate value retained, and lay the result out as a dataflow scene.
"""

from .addresses import AddressError, CellAddress, format_address, parse_address
from .ast import (
    Binary,
    BinaryOp,
    BoolLit,
    Call,
    CellRef,
    Expr,
    NumberLit,
    RangeRef,
    TextLit,
    Unary,
    UnaryOp,
    unparse,
)
from .evaluate import AnnotatedNode, EvalContext, evaluate
from .functions import FunctionSpec, builtin_registry, call_function
from .layout import LayoutConfig, SceneEdge, SceneGraph, SceneNode, layout, measure_node
from .lexer import ParseError, Token, TokenKind, tokenize
from .ops import apply_binary, apply_unary
from .parser import parse
from .render import SceneJSONError, Theme, from_json, to_json, to_svg
from .sheet import FormulaCell, LiteralCell, Sheet, load_sheet, save_sheet
from .values import EMPTY, ErrorKind, Value, format_value

__all__ = [
    "AddressError",
    "AnnotatedNode",
    "Binary",
    "BinaryOp",
    "BoolLit",
    "Call",
    "CellAddress",
    "CellRef",
    "EMPTY",
    "ErrorKind",
    "EvalContext",
    "Expr",
    "FormulaCell",
    "FunctionSpec",
    "LayoutConfig",
    "LiteralCell",
    "NumberLit",
    "ParseError",
    "RangeRef",
    "SceneEdge",
    "SceneGraph",
    "SceneJSONError",
    "SceneNode",
    "Sheet",
    "TextLit",
    "Theme",
    "Token",
    "TokenKind",
    "Unary",
    "UnaryOp",
    "Value",
    "apply_binary",
    "apply_unary",
    "builtin_registry",
    "call_function",
    "evaluate",
    "format_address",
    "format_value",
    "from_json",
    "layout",
    "load_sheet",
    "measure_node",
    "parse",
    "parse_address",
    "save_sheet",
    "to_json",
    "to_svg",
    "tokenize",
    "unparse",
]

__version__ = "0.1.0"
