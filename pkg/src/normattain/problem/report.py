"""Report dictionaries, their JSON and text renderings and schema validation.

JSON output is ``json.dumps(..., sort_keys=True, indent=2)`` of plain floats,
so identical inputs give byte-identical output.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from typing import Any

import numpy as np

from normattain.attain.criteria import AttainmentVerdict, NormingVector
from normattain.errors import ValidationError
from normattain.halmos.decomposition import HalmosDecomposition
from normattain.problem.loader import schema_validator
from normattain.skew.analysis import SkewAnalysis
from normattain.symbol.element import SUBSPACES
from normattain.verify.oracles import TrialReport

Report = dict[str, Any]


def _key(index: tuple[int, int]) -> str:
    return f"{index[0]}{index[1]}"


def _opt(value: float | None) -> float | None:
    return None if value is None else float(value)


# -- builders --------------------------------------------------------------------


def decomposition_report(d: HalmosDecomposition, residual: float) -> Report:
    return {
        "kind": "decomposition",
        "dimension": d.dimension,
        "sizes": d.sizes(),
        "present": [_key(k) for k in SUBSPACES if k in d.present],
        "h_values": [float(h) for h in d.h_values],
        "reconstruct_residual": float(residual),
    }


def _norming(vector: NormingVector | None) -> dict[str, Any] | None:
    if vector is None:
        return None
    return {
        "location": vector.location,
        "x": _opt(vector.x),
        "vector": [[float(v.real), float(v.imag)] for v in np.asarray(vector.vector)],
    }


def verdict_report(
    verdict: AttainmentVerdict,
    subject: str,
    scalar_max: float | None = None,
    norming: NormingVector | None = None,
) -> Report:
    sigma = []
    for point in verdict.sigma.points if verdict.sigma else ():
        item: dict[str, Any] = {"kind": point.kind.value, "x": float(point.x)}
        if point.upper is not None:
            item["upper"] = float(point.upper)
        if point.measure_class is not None:
            item["measure_class"] = point.measure_class.value
        sigma.append(item)
    return {
        "kind": "verdict",
        "subject": subject,
        "attained": bool(verdict.attained),
        "clause": verdict.clause.value,
        "norm": float(verdict.norm),
        "lambda_max": _opt(verdict.lambda_max),
        "scalar_max": _opt(scalar_max),
        "sigma": sigma,
        "norming_vector": _norming(norming),
    }


def skew_report(analysis: SkewAnalysis | None, verdict: Report | None, family: Report | None = None) -> Report:
    body = None
    if analysis is not None:
        body = {
            "dimension": int(analysis.p.shape[0]),
            "pq_norm": float(analysis.pq_norm),
            "afriat_residual": float(analysis.afriat_residual),
            "h_atoms": [float(a.value) for a in analysis.h_model.atoms],
            "m01": (0, 1) in analysis.t_symbol.present,
            "m10": (1, 0) in analysis.t_symbol.present,
            "norm": float(analysis.norm),
        }
    return {"kind": "skew", "analysis": body, "verdict": verdict, "family": family}


def verify_report(reports: Sequence[TrialReport]) -> Report:
    return {
        "kind": "verify",
        "passed": all(r.passed for r in reports),
        "suites": [r.as_dict() for r in reports],
    }


def truncation_report(variant: str, operator: str, dims: Sequence[int], norms: Sequence[float]) -> Report:
    return {
        "kind": "truncation",
        "variant": variant,
        "operator": operator,
        "dims": [int(n) for n in dims],
        "norms": [float(v) for v in norms],
    }


# -- output ----------------------------------------------------------------------


def validate_report(report: Report) -> None:
    errors = list(schema_validator("report").iter_errors(report))
    if errors:
        raise ValidationError(f"Report does not match its schema: {errors[0].message}")


def to_json(report: Report) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _num(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.12g}"


def _verdict_lines(v: Report, indent: str = "") -> list[str]:
    sigma = ", ".join(
        f"{p['kind'].replace('_', ' ')} {_num(p['x'])}" + (f"..{_num(p['upper'])}" if "upper" in p else "")
        for p in v["sigma"]
    )
    lines = [
        f"{indent}subject: {v['subject']}",
        f"{indent}attained: {str(v['attained']).lower()}",
        f"{indent}clause: {v['clause']}",
        f"{indent}lambda_max: {_num(v['lambda_max'])}",
        f"{indent}norm: {_num(v['norm'])}",
        f"{indent}Sigma: {sigma or 'n/a'}",
    ]
    nv = v["norming_vector"]
    if nv is not None:
        coords = ", ".join(f"{re:.6g}{im:+.6g}i" for re, im in nv["vector"])
        lines.append(f"{indent}norming vector: {nv['location']} ({coords})")
    return lines


def render_text(report: Report) -> str:
    kind = report["kind"]
    if kind == "decomposition":
        sizes = report["sizes"]
        lines = [
            f"dimension: {report['dimension']}",
            "sizes: " + ", ".join(f"{k}={sizes[k]}" for k in ("m00", "m01", "m10", "m11", "generic")),
            f"present: {', '.join(report['present']) or 'none'}",
            f"h: {', '.join(_num(h) for h in report['h_values']) or 'none'}",
            f"reconstruct residual: {report['reconstruct_residual']:.3e}",
        ]
    elif kind == "verdict":
        lines = _verdict_lines(report)
    elif kind == "skew":
        lines = []
        a = report["analysis"]
        if a is not None:
            lines += [
                f"dimension: {a['dimension']}",
                f"||PQ||: {_num(a['pq_norm'])}",
                f"afriat residual: {a['afriat_residual']:.3e}",
                f"H atoms: {', '.join(_num(h) for h in a['h_atoms'])}",
            ]
        if report["verdict"] is not None:
            lines += _verdict_lines(report["verdict"])
        if report["family"] is not None:
            lines += ["family:"] + _verdict_lines(report["family"], "  ")
    elif kind == "verify":
        lines = [f"passed: {str(report['passed']).lower()}"]
        for suite in report["suites"]:
            lines.append(
                f"{suite['name']}: trials={suite['trials']} n={suite['dimension']} seed={suite['seed']} "
                f"max_residual={suite['max_residual']:.3e} failures={len(suite['failures'])}"
            )
    else:
        lines = [f"{report['variant']} {report['operator']}"]
        lines += [f"n={n}: {_num(v)}" for n, v in zip(report["dims"], report["norms"])]
    return "\n".join(lines) + "\n"
