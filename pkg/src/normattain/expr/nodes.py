"""Expression trees for complex-valued functions of one real variable ``x``.

Nodes are frozen dataclasses, so structural equality is ``==``. A ``Const``
only ever holds a non-negative finite real or the imaginary unit: those are
exactly the constants the grammar can spell, which makes ``format`` the
inverse of ``parse`` for every tree. Use :func:`constant` to embed an
arbitrary complex number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
import numpy.typing as npt

from normattain.errors import EvalError, ValidationError

BINARY_OPS = ("+", "-", "*", "/")
FUNCTIONS = ("sqrt", "abs", "conj", "neg")


@dataclass(frozen=True)
class Const:
    value: complex

    def __post_init__(self) -> None:
        v = complex(self.value)
        if v == 1j:
            return
        if v.imag != 0.0 or not math.isfinite(v.real) or v.real < 0.0:
            raise ValidationError(f"Const holds a non-negative real or i, got {v!r}; use constant()")


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Binary:
    op: str
    left: Expr
    right: Expr

    def __post_init__(self) -> None:
        if self.op not in BINARY_OPS:
            raise ValidationError(f"Unknown binary operator {self.op!r}")


@dataclass(frozen=True)
class Power:
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Unary:
    func: str
    operand: Expr

    def __post_init__(self) -> None:
        if self.func not in FUNCTIONS:
            raise ValidationError(f"Unknown function {self.func!r}")


Expr = Union[Const, Var, Binary, Power, Unary]

X = Var()
ZERO = Const(0.0)
ONE = Const(1.0)
I_UNIT = Const(1j)


# -- builders --------------------------------------------------------------------


def constant(value: complex) -> Expr:
    """Tree for an arbitrary finite complex constant."""
    v = complex(value)
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise ValidationError(f"Constant must be finite, got {v!r}")
    re, im = v.real + 0.0, v.imag + 0.0
    real_part = _real_constant(re) if re != 0.0 or im == 0.0 else None
    if im == 0.0:
        return real_part  # type: ignore[return-value]
    imag_part = I_UNIT if abs(im) == 1.0 else Binary("*", Const(abs(im)), I_UNIT)
    if real_part is None:
        return imag_part if im > 0 else Unary("neg", imag_part)
    return Binary("+" if im > 0 else "-", real_part, imag_part)


def _real_constant(value: float) -> Expr:
    return Const(value) if value >= 0.0 else Unary("neg", Const(-value))


def add(left: Expr, right: Expr) -> Expr:
    if left == ZERO:
        return right
    if right == ZERO:
        return left
    return Binary("+", left, right)


def sub(left: Expr, right: Expr) -> Expr:
    if right == ZERO:
        return left
    if left == ZERO:
        return neg(right)
    return Binary("-", left, right)


def mul(left: Expr, right: Expr) -> Expr:
    if left == ZERO or right == ZERO:
        return ZERO
    if left == ONE:
        return right
    if right == ONE:
        return left
    return Binary("*", left, right)


def div(left: Expr, right: Expr) -> Expr:
    return Binary("/", left, right)


def neg(operand: Expr) -> Expr:
    if operand == ZERO:
        return ZERO
    return Unary("neg", operand)


def conj(operand: Expr) -> Expr:
    return Unary("conj", operand)


def sqrt(operand: Expr) -> Expr:
    return Unary("sqrt", operand)


def power(base: Expr, exponent: int) -> Expr:
    return Power(base, int(exponent))


# -- formatting ------------------------------------------------------------------


def _format_number(value: float) -> str:
    if value.is_integer() and value < 1e16:
        return str(int(value))
    return repr(value)


def format_expr(expr: Expr) -> str:
    """Fully parenthesised canonical rendering."""
    if isinstance(expr, Const):
        return "i" if complex(expr.value) == 1j else _format_number(complex(expr.value).real)
    if isinstance(expr, Var):
        return "x"
    if isinstance(expr, Binary):
        return f"({format_expr(expr.left)}{expr.op}{format_expr(expr.right)})"
    if isinstance(expr, Power):
        return f"({format_expr(expr.base)}^{expr.exponent})"
    if isinstance(expr, Unary):
        name = "-" if expr.func == "neg" else expr.func
        return f"{name}({format_expr(expr.operand)})"
    raise TypeError(f"Not an expression node: {expr!r}")


# -- evaluation ------------------------------------------------------------------

ComplexArray = npt.NDArray[np.complex128]


def _first_bad(xs: npt.NDArray[np.float64], mask: npt.NDArray[np.bool_]) -> float:
    return float(xs[np.argmax(mask)])


def _eval(expr: Expr, xs: npt.NDArray[np.float64]) -> ComplexArray:
    if isinstance(expr, Const):
        out = np.full(xs.shape, complex(expr.value), dtype=np.complex128)
    elif isinstance(expr, Var):
        out = xs.astype(np.complex128)
    elif isinstance(expr, Binary):
        left = _eval(expr.left, xs)
        right = _eval(expr.right, xs)
        if expr.op == "+":
            out = left + right
        elif expr.op == "-":
            out = left - right
        elif expr.op == "*":
            out = left * right
        else:
            zero = right == 0
            if np.any(zero):
                raise EvalError(EvalError.DIVISION_BY_ZERO, _first_bad(xs, zero), format_expr(expr))
            out = left / right
    elif isinstance(expr, Power):
        base = _eval(expr.base, xs)
        if expr.exponent < 0:
            zero = base == 0
            if np.any(zero):
                raise EvalError(EvalError.DIVISION_BY_ZERO, _first_bad(xs, zero), format_expr(expr))
        out = base**expr.exponent
    elif isinstance(expr, Unary):
        inner = _eval(expr.operand, xs)
        if expr.func == "sqrt":
            # +0.0 imaginary part keeps negative reals on the principal branch: sqrt(-1) = i
            inner = np.where(inner.imag == 0, inner.real + 0j, inner)
            out = np.sqrt(inner)
        elif expr.func == "abs":
            out = np.abs(inner).astype(np.complex128)
        elif expr.func == "conj":
            out = np.conj(inner)
        else:
            out = -inner
    else:
        raise TypeError(f"Not an expression node: {expr!r}")

    bad = ~np.isfinite(out)
    if np.any(bad):
        raise EvalError(EvalError.NON_FINITE, _first_bad(xs, bad), format_expr(expr))
    return out


def evaluate_array(expr: Expr, xs: npt.ArrayLike) -> ComplexArray:
    """Evaluate at every point of a real array."""
    points = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    with np.errstate(all="ignore"):
        return _eval(expr, points)


def evaluate(expr: Expr, x: float) -> complex:
    """Evaluate at a single finite real point."""
    if not math.isfinite(x):
        raise EvalError(EvalError.NON_FINITE, x, "evaluation point must be finite")
    return complex(evaluate_array(expr, [x])[0])
