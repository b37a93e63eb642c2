"""lambda_max, Sigma(A), norm attainment and the kernel / eigenvalue criteria."""

from normattain.attain.criteria import (
    AttainmentVerdict,
    Clause,
    EigenvalueMembership,
    NormingVector,
    decide_attainment,
    eigenvalue_membership,
    is_eigenvalue,
    kernel_nontrivial,
    norming_vector,
)
from normattain.attain.maximize import MaximizerPoint, MaximizerSet, PointKind, lambda_max

__all__ = [
    "AttainmentVerdict",
    "Clause",
    "EigenvalueMembership",
    "MaximizerPoint",
    "MaximizerSet",
    "NormingVector",
    "PointKind",
    "decide_attainment",
    "eigenvalue_membership",
    "is_eigenvalue",
    "kernel_nontrivial",
    "lambda_max",
    "norming_vector",
]
