"""Problem files: UTF-8 JSON validated against ``schema/problem.schema.json``.

Complex numbers are plain numbers or ``[re, im]`` pairs, matrices are
row-major nested arrays, scalars are keyed ``"00" .. "11"`` and symbol
entries are expression strings (or constants). Expressions are parsed while
loading so that syntax errors carry the field path.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Union

from jsonschema import Draft202012Validator as validator
from jsonschema.exceptions import best_match

from normattain import expr as ex
from normattain.errors import ExprSyntaxError, ValidationError
from normattain.linalg.dense import ComplexMatrix, as_matrix
from normattain.skew.families import Ex3Variant
from normattain.symbol.element import SymbolMatrix, WStarElement, build_element
from normattain.symbol.model import Atom, ClosedInterval, LimitPoint, MeasureClass, SpectralModel

logger = logging.getLogger(__name__)

SCHEMA_DIR = Path(__file__).parent / "schema"


@dataclass(frozen=True)
class PairProblem:
    p: ComplexMatrix
    q: ComplexMatrix
    a: ComplexMatrix | None = None
    scalars: dict[str, complex] | None = None
    symbol: SymbolMatrix | None = None


@dataclass(frozen=True)
class SkewProblem:
    t: ComplexMatrix


@dataclass(frozen=True)
class FamilyProblem:
    variant: Ex3Variant
    n_atoms: int | None
    operator: str


Payload = Union[PairProblem, SkewProblem, WStarElement, FamilyProblem]


@dataclass(frozen=True)
class ProblemFile:
    kind: str
    payload: Payload
    path: Path | None = None


@lru_cache(maxsize=None)
def schema_validator(name: str = "problem") -> validator:
    with open(SCHEMA_DIR / f"{name}.schema.json", encoding="utf-8") as fp:
        return validator(schema=json.load(fp), format_checker=validator.FORMAT_CHECKER)


def _field(path: Any) -> str:
    out = "$"
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def _complex(value: Any) -> complex:
    if isinstance(value, list):
        return complex(value[0], value[1])
    return complex(value)


def _matrix(rows: list[list[Any]], where: str) -> ComplexMatrix:
    if len({len(r) for r in rows}) != 1:
        raise ValidationError(f"{where}: rows have different lengths")
    try:
        return as_matrix([[_complex(v) for v in row] for row in rows])
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _symbol(rows: list[list[Any]], where: str) -> SymbolMatrix:
    entries: list[list[ex.Expr]] = []
    for i, row in enumerate(rows):
        parsed = []
        for j, entry in enumerate(row):
            field = f"{where}[{i}][{j}]"
            if isinstance(entry, str):
                try:
                    parsed.append(ex.parse(entry))
                except ExprSyntaxError as exc:
                    raise ExprSyntaxError(f"{field}: {exc.reason}", exc.offset, exc.expected) from exc
            else:
                parsed.append(ex.constant(_complex(entry)))
        entries.append(parsed)
    return SymbolMatrix.of(entries)


def _model(data: dict[str, Any], where: str) -> SpectralModel:
    atoms = []
    for k, item in enumerate(data.get("atoms", [])):
        if isinstance(item, dict):
            atoms.append(Atom(float(item["value"]), item.get("label", f"h{k}")))
        else:
            atoms.append(Atom(float(item), f"h{k}"))
    essential: list[ClosedInterval | LimitPoint] = [
        ClosedInterval(
            float(iv["lo"]),
            float(iv["hi"]),
            MeasureClass(iv.get("measure_class", MeasureClass.ABSOLUTELY_CONTINUOUS.value)),
        )
        for iv in data.get("intervals", [])
    ]
    essential += [LimitPoint(float(v)) for v in data.get("limit_points", [])]
    try:
        return SpectralModel(atoms=tuple(atoms), essential=tuple(essential))
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def parse_problem(data: Any, path: Path | None = None) -> ProblemFile:
    """Validate decoded JSON and build the typed payload."""
    first = best_match(schema_validator().iter_errors(data))
    if first is not None:
        raise ValidationError(f"{_field(first.absolute_path)}: {first.message}")

    kind = data["kind"]
    payload: Payload
    if kind == "projection_pair":
        element = data.get("element")
        payload = PairProblem(
            p=_matrix(data["p"], "$.p"),
            q=_matrix(data["q"], "$.q"),
            a=_matrix(data["a"], "$.a") if "a" in data else None,
            scalars={key: _complex(v) for key, v in element.get("scalars", {}).items()} if element else None,
            symbol=_symbol(element["symbol"], "$.element.symbol") if element else None,
        )
    elif kind == "skew":
        payload = SkewProblem(t=_matrix(data["t"], "$.t"))
    elif kind == "element":
        model = _model(data["model"], "$.model")
        symbol = _symbol(data["symbol"], "$.symbol")
        scalars = {key: _complex(v) for key, v in data.get("scalars", {}).items()}
        payload = build_element(scalars, symbol, model)
    else:
        payload = FamilyProblem(
            variant=Ex3Variant(data["variant"]),
            n_atoms=data.get("n_atoms"),
            operator=data.get("operator", "A"),
        )
    logger.debug("Loaded %s problem%s", kind, f" from {path}" if path else "")
    return ProblemFile(kind=kind, payload=payload, path=path)


def load(path: str | Path) -> ProblemFile:
    """Read, validate and parse a problem file.

    Raises:
        ValidationError: unreadable file, invalid JSON (with line and column),
            schema violations or invalid values (with the field path).
        ExprSyntaxError: a symbol entry does not parse.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"Cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_problem(data, path)
