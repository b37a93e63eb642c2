"""Expression language for the symbol functions phi_ij(x)."""

from normattain.expr.nodes import (
    I_UNIT,
    ONE,
    ZERO,
    X,
    Binary,
    Const,
    Expr,
    Power,
    Unary,
    Var,
    add,
    conj,
    constant,
    div,
    evaluate,
    evaluate_array,
    format_expr,
    mul,
    neg,
    power,
    sqrt,
    sub,
)
from normattain.expr.parser import parse

__all__ = [
    "I_UNIT",
    "ONE",
    "ZERO",
    "X",
    "Binary",
    "Const",
    "Expr",
    "Power",
    "Unary",
    "Var",
    "add",
    "conj",
    "constant",
    "div",
    "evaluate",
    "evaluate_array",
    "format_expr",
    "mul",
    "neg",
    "parse",
    "power",
    "sqrt",
    "sub",
]
