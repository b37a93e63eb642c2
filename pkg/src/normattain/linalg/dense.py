"""Dense complex linear algebra primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The Hermitian
eigensolver is a cyclic Jacobi iteration with complex rotations; singular
values and ranges come from the LAPACK SVD behind ``numpy.linalg.svd`` so that
the oracles do not share code with the eigensolver they check.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from normattain.errors import NoConvergence, NotHermitian, ValidationError

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]

DEFAULT_TOL = 1e-10
MAX_SWEEPS = 100
OFF_DIAGONAL_RTOL = 1e-13


def as_matrix(data: Any) -> ComplexMatrix:
    """Coerce nested sequences or arrays to a 2-D complex matrix."""
    matrix = np.array(data, dtype=np.complex128)
    if matrix.ndim != 2:
        raise ValidationError(f"Expected a 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValidationError("Matrix contains non-finite entries")
    return matrix


def max_abs(matrix: npt.ArrayLike) -> float:
    """Max-entry norm; 0 for empty matrices."""
    arr = np.asarray(matrix)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def hermitian_residual(matrix: ComplexMatrix) -> float:
    return max_abs(matrix - matrix.conj().T)


def is_hermitian(matrix: ComplexMatrix, tol: float = DEFAULT_TOL) -> bool:
    return matrix.shape[0] == matrix.shape[1] and hermitian_residual(matrix) <= tol


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in ascending order and the matching orthonormal eigenvectors (columns)."""

    values: npt.NDArray[np.float64]
    vectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        return (self.vectors * self.values) @ self.vectors.conj().T

    def select(self, mask: npt.NDArray[np.bool_]) -> EigenSystem:
        return EigenSystem(values=self.values[mask], vectors=self.vectors[:, mask])


def _rotate(a: ComplexMatrix, v: ComplexMatrix, p: int, q: int) -> None:
    """Annihilate a[p, q] in place with a complex Jacobi rotation."""
    apq = a[p, q]
    r = abs(apq)
    phase = apq / r
    tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    app = a[p, p].real - t * r
    aqq = a[q, q].real + t * r

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * phase.conjugate() * col_q
    a[:, q] = s * phase * col_p + c * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * phase * row_q
    a[q, :] = s * phase.conjugate() * row_p + c * row_q
    a[p, p] = app
    a[q, q] = aqq
    a[p, q] = 0.0
    a[q, p] = 0.0

    vec_p = v[:, p].copy()
    vec_q = v[:, q].copy()
    v[:, p] = c * vec_p - s * phase.conjugate() * vec_q
    v[:, q] = s * phase * vec_p + c * vec_q


def hermitian_eig(matrix: ComplexMatrix, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS) -> EigenSystem:
    """Full eigensystem of a Hermitian matrix by cyclic Jacobi sweeps.

    Args:
        matrix: Square matrix, Hermitian up to ``tol`` (scaled by max(1, max|M|)).
        tol: Symmetry tolerance.
        max_sweeps: Sweep cap; reaching it raises NoConvergence.

    Returns:
        EigenSystem with ascending values and orthonormal eigenvectors.
    """
    m = as_matrix(matrix)
    n, cols = m.shape
    if n != cols:
        raise ValidationError(f"Eigensystem needs a square matrix, got {m.shape}")
    residual = hermitian_residual(m)
    if residual > tol * max(1.0, max_abs(m)):
        raise NotHermitian(f"Symmetry residual {residual:.3e} exceeds tolerance {tol:.3e}")

    a = 0.5 * (m + m.conj().T)
    v = np.eye(n, dtype=np.complex128)
    frobenius = float(np.linalg.norm(a))
    if frobenius == 0.0 or n == 1:
        return EigenSystem(values=np.real(np.diag(a)).copy(), vectors=v)

    threshold = OFF_DIAGONAL_RTOL * frobenius
    upper = np.triu_indices(n, k=1)
    for sweep in range(max_sweeps):
        off = math.sqrt(2.0) * float(np.linalg.norm(a[upper]))
        if off <= threshold:
            logger.debug("Jacobi converged after %d sweeps (n=%d, off=%.2e)", sweep, n, off)
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > threshold / n:
                    _rotate(a, v, p, q)
    else:
        off = math.sqrt(2.0) * float(np.linalg.norm(a[upper]))
        if off > threshold:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {off:.3e})")

    values = np.real(np.diag(a))
    order = np.argsort(values, kind="stable")
    return EigenSystem(values=values[order].copy(), vectors=v[:, order].copy())


def largest_singular_value(matrix: npt.ArrayLike) -> float:
    """Spectral norm; 0 for zero or empty matrices."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def orthonormal_range(matrix: npt.ArrayLike, tol: float = DEFAULT_TOL) -> ComplexMatrix:
    """Orthonormal basis (columns) of the column space.

    Singular values below ``tol * sigma_max`` count as zero; the zero matrix
    gives an ``n x 0`` family.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    rows = m.shape[0]
    if m.size == 0:
        return np.zeros((rows, 0), dtype=np.complex128)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros((rows, 0), dtype=np.complex128)
    rank = int(np.count_nonzero(s > tol * s[0]))
    return u[:, :rank].copy()


def check_orthogonal_projection(matrix: ComplexMatrix, tol: float = DEFAULT_TOL) -> bool:
    """True iff the matrix is Hermitian and idempotent in the max-entry norm."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return hermitian_residual(m) <= tol and max_abs(m @ m - m) <= tol


def projector(basis: ComplexMatrix) -> ComplexMatrix:
    """Orthogonal projection onto the span of orthonormal columns."""
    return basis @ basis.conj().T
