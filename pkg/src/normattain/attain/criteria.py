"""Norm attainment verdicts and the kernel / eigenvalue criteria.

All three questions reduce to whether some subset of sigma(H) has nonzero
spectral measure: atoms always do, limit points never do, and a subset of
an interval does when it contains a run of positive length and the interval
is declared absolutely continuous.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt

from normattain.attain.maximize import (
    DEFAULT_GRID,
    DEFAULT_MIN_RUN,
    DEFAULT_PLATEAU_RTOL,
    DEFAULT_REFINE,
    MaximizerSet,
    lambda_max,
    runs,
)
from normattain.errors import EmptyModel, IndeterminateMeasure
from normattain.linalg.dense import hermitian_eig
from normattain.symbol.element import WStarElement, sample_symbol
from normattain.symbol.model import MeasureClass, SpectralModel

logger = logging.getLogger(__name__)

DEFAULT_ZERO_THRESHOLD = 1e-11
TIE_RTOL = 1e-12


class Clause(str, Enum):
    SCALAR_DOMINATES = "scalar_dominates"
    SIGMA_HAS_MASS = "sigma_has_mass"
    SIGMA_NULL = "sigma_null"


@dataclass(frozen=True)
class AttainmentVerdict:
    norm: float
    lambda_max: float | None
    sigma: MaximizerSet | None
    attained: bool
    clause: Clause


def decide_attainment(
    element: WStarElement,
    grid: int = DEFAULT_GRID,
    refine: int = DEFAULT_REFINE,
    plateau_rtol: float = DEFAULT_PLATEAU_RTOL,
    min_run: int = DEFAULT_MIN_RUN,
) -> AttainmentVerdict:
    """Decide whether A attains its norm.

    Clause (i) fires when max |a_ij| >= sqrt(lambda_max); otherwise A attains
    its norm iff Sigma(A) has nonzero spectral measure.

    Raises:
        IndeterminateMeasure: the verdict hinges on a plateau inside an
            interval whose measure class is ``unspecified``.
        EmptyModel: neither scalars nor a generic part are present.
    """
    scalar = element.scalar_max
    if element.model.is_empty:
        if scalar is None:
            raise EmptyModel("Element acts on the zero space")
        return AttainmentVerdict(scalar, None, None, True, Clause.SCALAR_DOMINATES)

    sigma = lambda_max(element, grid=grid, refine=refine, plateau_rtol=plateau_rtol, min_run=min_run)
    root = math.sqrt(sigma.value)
    # Ties go to clause (i), which is stated with ">=".
    if scalar is not None and scalar >= root * (1.0 - TIE_RTOL):
        verdict = AttainmentVerdict(scalar, sigma.value, sigma, True, Clause.SCALAR_DOMINATES)
    else:
        masses = [p.carries_mass for p in sigma.points]
        if any(m is True for m in masses):
            verdict = AttainmentVerdict(root, sigma.value, sigma, True, Clause.SIGMA_HAS_MASS)
        elif any(m is None for m in masses):
            raise IndeterminateMeasure(
                "Sigma(A) is a plateau inside an interval with unspecified measure class; declare it "
                "absolutely_continuous or add atoms"
            )
        else:
            verdict = AttainmentVerdict(root, sigma.value, sigma, False, Clause.SIGMA_NULL)
    logger.info(
        "Verdict: attained=%s clause=%s norm=%.12g lambda_max=%.12g",
        verdict.attained,
        verdict.clause.value,
        verdict.norm,
        sigma.value,
    )
    return verdict


def _zero_set_has_mass(
    model: SpectralModel,
    is_zero: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.bool_]],
    grid: int,
    min_run: int,
) -> bool:
    if model.atoms and np.any(is_zero(model.atom_values)):
        return True
    indeterminate = False
    for interval in model.intervals:
        if interval.hi <= interval.lo:
            continue
        xs = np.linspace(interval.lo, interval.hi, grid)
        if not any(end - start + 1 >= min_run for start, end in runs(is_zero(xs))):
            continue
        if interval.measure_class is MeasureClass.ABSOLUTELY_CONTINUOUS:
            return True
        indeterminate = True
    if indeterminate:
        raise IndeterminateMeasure("Zero set has positive length inside an interval with unspecified measure class")
    return False


def kernel_nontrivial(
    element: WStarElement,
    zero_threshold: float = DEFAULT_ZERO_THRESHOLD,
    grid: int = DEFAULT_GRID,
    min_run: int = DEFAULT_MIN_RUN,
) -> bool:
    """Whether Phi_A(H) has a nontrivial kernel, i.e. {omega = 0} has nonzero measure."""

    def is_zero(xs: npt.NDArray[np.float64]) -> npt.NDArray[np.bool_]:
        phi, omega, _ = sample_symbol(element, xs)
        return np.abs(omega) <= zero_threshold * (1.0 + phi)

    return _zero_set_has_mass(element.model, is_zero, grid, min_run)


@dataclass(frozen=True)
class EigenvalueMembership:
    symbol_part: bool
    scalar_part: bool

    @property
    def is_eigenvalue(self) -> bool:
        return self.symbol_part or self.scalar_part


def eigenvalue_membership(
    element: WStarElement,
    lam: complex,
    zero_threshold: float = DEFAULT_ZERO_THRESHOLD,
    grid: int = DEFAULT_GRID,
    min_run: int = DEFAULT_MIN_RUN,
) -> EigenvalueMembership:
    """Eigenvalue test split into the Phi_A(H) part and the scalar blocks."""
    lam = complex(lam)

    def is_root(xs: npt.NDArray[np.float64]) -> npt.NDArray[np.bool_]:
        blocks = element.symbol.at(xs)
        trace = blocks[:, 0, 0] + blocks[:, 1, 1]
        det = blocks[:, 0, 0] * blocks[:, 1, 1] - blocks[:, 0, 1] * blocks[:, 1, 0]
        quadratic = lam * lam - trace * lam + det
        scale = 1.0 + abs(lam) ** 2 + np.abs(trace) * abs(lam) + np.abs(det)
        return np.abs(quadratic) <= zero_threshold * scale

    symbol_part = False if element.model.is_empty else _zero_set_has_mass(element.model, is_root, grid, min_run)
    scalar_part = any(abs(lam - a) <= zero_threshold * (1.0 + abs(lam)) for a in element.scalars.values())
    return EigenvalueMembership(symbol_part=symbol_part, scalar_part=scalar_part)


def is_eigenvalue(element: WStarElement, lam: complex, **kwargs: Any) -> bool:
    return eigenvalue_membership(element, lam, **kwargs).is_eigenvalue


@dataclass(frozen=True)
class NormingVector:
    """Unit vector achieving ||Ax|| = ||A||.

    ``location`` is ``M_ij`` for a scalar block (vector of length 1) or the
    kind of the maximizer for the generic part (vector in M (+) M at ``x``).
    """

    location: str
    x: float | None
    vector: npt.NDArray[np.complex128]


def _fix_phase(v: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
    pivot = v[np.argmax(np.abs(v) > 1e-12)]
    return v * (abs(pivot) / pivot)


def norming_vector(element: WStarElement, verdict: AttainmentVerdict | None = None) -> NormingVector | None:
    """A norm-attaining unit vector, or None when the norm is not attained."""
    verdict = verdict or decide_attainment(element)
    if not verdict.attained:
        return None
    if verdict.clause is Clause.SCALAR_DOMINATES:
        key = max(element.scalars, key=lambda k: abs(element.scalars[k]))
        return NormingVector(f"M_{key[0]}{key[1]}", None, np.ones(1, dtype=np.complex128))

    assert verdict.sigma is not None
    point = next(p for p in verdict.sigma.points if p.carries_mass)
    x = point.x if point.upper is None else 0.5 * (point.x + point.upper)
    block = element.symbol.at([x])[0]
    eig = hermitian_eig(block.conj().T @ block)
    vector = _fix_phase(eig.vectors[:, -1])
    return NormingVector(point.kind.value, float(x), vector)
