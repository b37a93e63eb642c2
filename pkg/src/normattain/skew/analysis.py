"""Skew projections T through the orthogonal pair P = P_Ran T, Q = P_Ker T."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from normattain.attain.criteria import AttainmentVerdict, decide_attainment
from normattain.errors import AfriatViolation, NotIdempotent, NotSkew, NumericalFailure, ValidationError
from normattain.linalg.dense import (
    MAX_SWEEPS,
    ComplexMatrix,
    as_matrix,
    hermitian_eig,
    largest_singular_value,
    orthonormal_range,
    projector,
)
from normattain.symbol.element import SymbolMatrix, WStarElement, build_element, norm
from normattain.symbol.model import SpectralModel

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_CLASSIFY_EPS = 1e-8

# Phi_T(x) on M (+) M.
T_SYMBOL = SymbolMatrix.of([["1", "-sqrt(1/x - 1)"], ["0", "0"]])


@dataclass(frozen=True)
class SkewAnalysis:
    p: ComplexMatrix
    q: ComplexMatrix
    pq_norm: float
    afriat_residual: float
    h_model: SpectralModel
    t_symbol: WStarElement
    norm: float


def skew_element(model: SpectralModel, m01: bool = False, m10: bool = False) -> WStarElement:
    """T as an element: 1 on M_01, 0 on M_10, symbol [[1, -sqrt(1/x - 1)], [0, 0]].

    Raises:
        ValidationError: 0 belongs to the model, so H is not invertible.
    """
    if not model.is_empty and model.minimum <= 0.0:
        raise ValidationError("A skew projection needs invertible H: 0 must not lie in the spectral model")
    scalars: dict[tuple[int, int], complex] = {}
    if m01:
        scalars[(0, 1)] = 1.0
    if m10:
        scalars[(1, 0)] = 0.0
    return build_element(scalars, T_SYMBOL, model)


def _merge_atoms(values: np.ndarray, eps: float) -> list[float]:
    merged: list[float] = []
    for v in np.sort(values):
        if merged and v - merged[-1] <= eps:
            logger.warning("Merged H eigenvalue %.15g into atom %.15g (multiplicity)", v, merged[-1])
            continue
        merged.append(float(v))
    return merged


def analyze_skew(
    t: ComplexMatrix,
    tol: float = DEFAULT_TOL,
    classify_eps: float = DEFAULT_CLASSIFY_EPS,
    max_sweeps: int = MAX_SWEEPS,
    **search: Any,
) -> SkewAnalysis:
    """Decompose an idempotent T and check T = (I - PQ)^-1 P (I - PQ).

    Args:
        t: Square idempotent matrix.
        tol: Idempotence, rank and Afriat tolerance (relative to ||T||).
        classify_eps: Eigenvalues of H within this of 1 are M_01 directions.
        max_sweeps: Jacobi sweep cap for the eigensystem of H.
        **search: Forwarded to the lambda_max search for ``norm``.

    Raises:
        NotIdempotent: ||T^2 - T|| > tol * ||T||.
        NotSkew: ||T|| <= 1 + tol.
        AfriatViolation: ||PQ|| >= 1, H has an eigenvalue near 0, or the
            Afriat residual exceeds 10 * tol * ||T||.
    """
    t = as_matrix(t)
    n = t.shape[0]
    if t.shape != (n, n):
        raise NotIdempotent(f"T must be square, got {t.shape}")
    t_norm = largest_singular_value(t)
    defect = largest_singular_value(t @ t - t)
    if defect > tol * max(1.0, t_norm):
        raise NotIdempotent(f"||T^2 - T|| = {defect:.3e} exceeds tolerance")
    if t_norm <= 1.0 + tol:
        raise NotSkew(f"||T|| = {t_norm:.12g} <= 1: T is an orthogonal projection or zero")

    ident = np.eye(n, dtype=np.complex128)
    ran_t = orthonormal_range(t, tol)
    ker_t = orthonormal_range(ident - t, tol)
    p = projector(ran_t)
    q = projector(ker_t)

    pq = p @ q
    pq_norm = largest_singular_value(pq)
    if pq_norm >= 1.0:
        raise AfriatViolation(f"||PQ|| = {pq_norm:.12g} is not below 1")
    left = ident - pq
    try:
        afriat = np.linalg.solve(left, p @ left)
    except np.linalg.LinAlgError as exc:
        raise AfriatViolation(f"I - PQ is singular to working precision (||PQ|| = {pq_norm:.17g})") from exc
    residual = largest_singular_value(t - afriat)
    if residual > 10.0 * tol * t_norm:
        raise AfriatViolation(f"Afriat residual {residual:.3e} exceeds {10.0 * tol * t_norm:.3e}")

    # H = (I - PQP) restricted to Ran P.
    h_eig = hermitian_eig(np.eye(ran_t.shape[1]) - ran_t.conj().T @ q @ ran_t, tol, max_sweeps)
    values = h_eig.values
    if np.any(values <= classify_eps):
        raise AfriatViolation("H has an eigenvalue at 0, so ||PQ|| = 1")
    m01 = int(np.count_nonzero(values >= 1.0 - classify_eps))
    generic = values[values < 1.0 - classify_eps]
    m10 = (n - ran_t.shape[1]) - generic.size
    model = SpectralModel.from_atoms(_merge_atoms(generic, classify_eps))

    element = skew_element(model, m01=m01 > 0, m10=m10 > 0)
    analysis = SkewAnalysis(
        p=p,
        q=q,
        pq_norm=pq_norm,
        afriat_residual=residual,
        h_model=model,
        t_symbol=element,
        norm=norm(element, **search),
    )
    logger.info(
        "Skew analysis: n=%d ||PQ||=%.12g afriat=%.3e atoms=%d m01=%d m10=%d norm=%.12g",
        n,
        pq_norm,
        residual,
        len(model.atoms),
        m01,
        m10,
        analysis.norm,
    )
    return analysis


def attains_norm(target: SkewAnalysis | SpectralModel, **search: Any) -> AttainmentVerdict:
    """Attainment verdict for T, cross-checked against "min sigma(H) is an eigenvalue of H".

    H has eigenvalue 1 on M_01, so a present M_01 counts as an atom at 1.

    Raises:
        NumericalFailure: the symbol verdict and the spectral criterion disagree.
    """
    if isinstance(target, SkewAnalysis):
        element = target.t_symbol
    else:
        element = skew_element(target)
    verdict = decide_attainment(element, **search)

    model = element.model
    if model.is_empty:
        expected = True
    else:
        m01 = (0, 1) in element.present
        expected = model.minimum_is_atom or (m01 and model.minimum >= 1.0)
    if verdict.attained != expected:
        raise NumericalFailure(
            f"Attainment verdict {verdict.attained} disagrees with the eigenvalue test on min sigma(H) "
            f"({expected}); refine the grid"
        )
    return verdict
