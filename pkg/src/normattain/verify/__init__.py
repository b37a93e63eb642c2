"""Dense oracles and randomised cross-checks."""

from normattain.verify.oracles import (
    ElementSpec,
    TrialFailure,
    TrialReport,
    assemble_finite,
    crosscheck_norm,
    random_element_spec,
    random_projection_pair,
    truncation_norms,
)
from normattain.verify.suites import eigenvalue_oracle_suite, kernel_oracle_suite, run_random_suite

__all__ = [
    "ElementSpec",
    "TrialFailure",
    "TrialReport",
    "assemble_finite",
    "crosscheck_norm",
    "eigenvalue_oracle_suite",
    "kernel_oracle_suite",
    "random_element_spec",
    "random_projection_pair",
    "run_random_suite",
    "truncation_norms",
]
