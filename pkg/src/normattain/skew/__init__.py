"""Skew projections, the Afriat formula and the operator families built from T."""

from normattain.skew.analysis import SkewAnalysis, analyze_skew, attains_norm, skew_element
from normattain.skew.families import (
    Ex3Variant,
    alternating_power,
    buckholtz,
    example3_atoms,
    example3_model,
    linear_family,
)

__all__ = [
    "Ex3Variant",
    "SkewAnalysis",
    "alternating_power",
    "analyze_skew",
    "attains_norm",
    "buckholtz",
    "example3_atoms",
    "example3_model",
    "linear_family",
    "skew_element",
]
