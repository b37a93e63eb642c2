"""Dense complex linear algebra used by the decomposition and the oracles."""

from normattain.linalg.dense import (
    ComplexMatrix,
    EigenSystem,
    as_matrix,
    check_orthogonal_projection,
    hermitian_eig,
    largest_singular_value,
    max_abs,
    orthonormal_range,
    projector,
)

__all__ = [
    "ComplexMatrix",
    "EigenSystem",
    "as_matrix",
    "check_orthogonal_projection",
    "hermitian_eig",
    "largest_singular_value",
    "max_abs",
    "orthonormal_range",
    "projector",
]
