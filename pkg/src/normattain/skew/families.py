"""Operator families built from a skew projection T through the symbol pipeline.

Each family is assembled with adjoint / multiply / add on expression symbols
and then checked against its closed form, so a sign slip in the calculus
surfaces as a NumericalFailure instead of a wrong verdict.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt

from normattain.attain.maximize import lambda_max
from normattain.errors import NumericalFailure, ValidationError
from normattain.skew.analysis import skew_element
from normattain.symbol.element import WStarElement, add, adjoint, identity, multiply, sample_symbol, scale
from normattain.symbol.model import Atom, LimitPoint, SpectralModel

logger = logging.getLogger(__name__)

CLOSED_FORM_RTOL = 1e-12
POWER_RTOL = 1e-10
CHECK_GRID = 256
DEFAULT_EX3_ATOMS = 64


class Ex3Variant(str, Enum):
    ONE_OVER_N = "one_over_n"
    TWO_OVER_N = "two_over_n"


def _check_points(model: SpectralModel) -> npt.NDArray[np.float64]:
    return model.validation_points(CHECK_GRID)


def _mismatch(got: npt.ArrayLike, want: npt.ArrayLike) -> float:
    got = np.asarray(got)
    want = np.asarray(want)
    if got.size == 0:
        return 0.0
    return float(np.max(np.abs(got - want) / (1.0 + np.abs(want))))


def _base(model: SpectralModel, m01: bool, m10: bool) -> tuple[WStarElement, WStarElement]:
    t = skew_element(model, m01=m01, m10=m10)
    return t, adjoint(t)


# -- Example: T + alpha T* + beta I ----------------------------------------------


def linear_family(
    model: SpectralModel,
    alpha: float,
    beta: float,
    m01: bool = False,
    m10: bool = False,
    **search: Any,
) -> WStarElement:
    """T + alpha T* + beta I.

    With s = 1 + alpha + beta and f(x) = 1/x - 1 the symbol satisfies
    phi = s^2 + beta^2 + (1 + alpha^2) f and omega = s beta - alpha f. When
    min sigma(H) < 1 also lambda_max > max(s^2, beta^2). alpha = 1, beta = -1
    is the Buckholtz operator T + T* - I.

    Raises:
        NumericalFailure: a closed-form check fails.
    """
    alpha = float(alpha)
    beta = float(beta)
    t, t_star = _base(model, m01, m10)
    element = add(add(t, scale(t_star, alpha)), scale(identity(model, t.present), beta))
    if model.is_empty:
        return element

    xs = _check_points(model)
    phi, omega, _ = sample_symbol(element, xs)
    s = 1.0 + alpha + beta
    f = 1.0 / xs - 1.0
    phi_err = _mismatch(phi, s * s + beta * beta + (1.0 + alpha * alpha) * f)
    omega_err = _mismatch(omega, s * beta - alpha * f)
    if max(phi_err, omega_err) > CLOSED_FORM_RTOL:
        raise NumericalFailure(
            f"T + {alpha:g} T* + {beta:g} I: phi/omega off their closed forms by {max(phi_err, omega_err):.3e}"
        )

    if model.minimum < 1.0:
        value = lambda_max(element, **search).value
        bound = max(s * s, beta * beta)
        if not value > bound:
            raise NumericalFailure(f"lambda_max = {value:.15g} does not exceed max(s^2, beta^2) = {bound:.15g}")
    logger.debug("Built T + %g T* + %g I on %d atom(s)", alpha, beta, len(model.atoms))
    return element


def buckholtz(model: SpectralModel, m01: bool = False, m10: bool = False, **search: Any) -> WStarElement:
    return linear_family(model, 1.0, -1.0, m01=m01, m10=m10, **search)


# -- Example: alternating products T T* T ... ------------------------------------


def alternating_power(model: SpectralModel, m: int, m01: bool = False, m10: bool = False) -> WStarElement:
    """T^(m) = T T* T T* ... with m factors.

    For even m = 2k the symbol is checked against [[x^-k, 0], [0, 0]].
    """
    if m < 1:
        raise ValidationError(f"alternating_power needs m >= 1, got {m}")
    t, t_star = _base(model, m01, m10)
    element = t
    for k in range(1, m):
        element = multiply(element, t_star if k % 2 else t)

    if m % 2 == 0 and not model.is_empty:
        xs = _check_points(model)
        blocks = element.symbol.at(xs)
        want = np.zeros_like(blocks)
        want[:, 0, 0] = xs ** (-(m // 2))
        err = _mismatch(blocks, want)
        if err > POWER_RTOL:
            raise NumericalFailure(f"(T T*)^{m // 2} symbol off diag(x^-{m // 2}, 0) by {err:.3e}")
    return element


# -- Example: infinite direct sums of 2x2 skew blocks -----------------------------


def example3_atoms(variant: Ex3Variant | str, n_atoms: int) -> list[float]:
    """x_n = 1 / (1 + w_n^2) for w_n = 1/n or 2/n."""
    variant = Ex3Variant(variant)
    c = 1.0 if variant is Ex3Variant.ONE_OVER_N else 4.0
    return [n * n / (n * n + c) for n in range(1, n_atoms + 1)]


def example3_model(
    variant: Ex3Variant | str, n_atoms: int = DEFAULT_EX3_ATOMS
) -> tuple[SpectralModel, WStarElement]:
    """Model of H for T = (+)_n [[1, -w_n], [0, 0]] and A = TT* + T*T - T - T* - I.

    The atoms x_n accumulate at 1, which enters as a limit point. The symbol
    of A is checked against diag(1/x - 2, 1/x - 2).
    """
    if n_atoms < 1:
        raise ValidationError(f"example3_model needs n_atoms >= 1, got {n_atoms}")
    variant = Ex3Variant(variant)
    atoms = tuple(Atom(x, f"x{n}") for n, x in enumerate(example3_atoms(variant, n_atoms), start=1))
    model = SpectralModel(atoms=atoms, essential=(LimitPoint(1.0),))

    t, t_star = _base(model, False, False)
    a = add(add(multiply(t, t_star), multiply(t_star, t)), scale(add(add(t, t_star), identity(model)), -1.0))

    xs = _check_points(model)
    blocks = a.symbol.at(xs)
    want = np.zeros_like(blocks)
    want[:, 0, 0] = want[:, 1, 1] = 1.0 / xs - 2.0
    err = _mismatch(blocks, want)
    if err > POWER_RTOL:
        raise NumericalFailure(f"TT* + T*T - T - T* - I symbol off diag(1/x - 2) by {err:.3e}")
    logger.debug("Example model %s with %d atom(s)", variant.value, n_atoms)
    return model, a
