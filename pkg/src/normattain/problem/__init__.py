"""Problem files in, reports out."""

from normattain.problem.loader import FamilyProblem, PairProblem, ProblemFile, SkewProblem, load, parse_problem
from normattain.problem.report import render_text, to_json, validate_report

__all__ = [
    "FamilyProblem",
    "PairProblem",
    "ProblemFile",
    "SkewProblem",
    "load",
    "parse_problem",
    "render_text",
    "to_json",
    "validate_report",
]
