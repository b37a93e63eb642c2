"""Elements of W*(P,Q) through their scalars and 2x2 symbols.

An element is the scalar a_ij on each present intersection subspace M_ij
plus the 2x2 matrix Phi_A of functions of H acting on M (+) M. Symbol entries
are either expression trees or point tables keyed by atom value; both are
evaluated through :meth:`SymbolMatrix.at`.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Union

import numpy as np
import numpy.typing as npt

from normattain import expr as ex
from normattain.errors import EvalError, ModelMismatch, RadicandNegative, ValidationError
from normattain.symbol.model import VALIDATION_GRID, SpectralModel

logger = logging.getLogger(__name__)

Index = tuple[int, int]
SUBSPACES: tuple[Index, ...] = ((0, 0), (0, 1), (1, 0), (1, 1))
RADICAND_RTOL = 1e-12
TABLE_ATOL = 1e-12


@dataclass(frozen=True)
class PointTable:
    """Symbol entry known only at finitely many points."""

    points: tuple[float, ...]
    values: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(float(p) for p in self.points))
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))
        if len(self.points) != len(self.values):
            raise ValidationError("PointTable needs one value per point")

    def evaluate(self, xs: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        points = np.asarray(self.points, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.complex128)
        if points.size == 0:
            if xs.size:
                raise EvalError(EvalError.UNDEFINED_POINT, float(xs[0]), "empty table")
            return np.zeros(0, dtype=np.complex128)
        distance = np.abs(xs[:, None] - points[None, :])
        nearest = np.argmin(distance, axis=1)
        missing = distance[np.arange(xs.size), nearest] > TABLE_ATOL
        if np.any(missing):
            raise EvalError(EvalError.UNDEFINED_POINT, float(xs[np.argmax(missing)]), "not a tabulated atom")
        return values[nearest]

    def conjugate(self) -> PointTable:
        return PointTable(self.points, tuple(v.conjugate() for v in self.values))


SymbolEntry = Union[ex.Binary, ex.Const, ex.Power, ex.Unary, ex.Var, PointTable]


def _entry_values(entry: SymbolEntry, xs: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
    if isinstance(entry, PointTable):
        return entry.evaluate(xs)
    return ex.evaluate_array(entry, xs)


@dataclass(frozen=True)
class SymbolMatrix:
    """2x2 matrix of symbol entries."""

    entries: tuple[tuple[SymbolEntry, SymbolEntry], tuple[SymbolEntry, SymbolEntry]]

    @classmethod
    def of(cls, rows: Sequence[Sequence[SymbolEntry | str | complex]]) -> SymbolMatrix:
        """Build from a 2x2 nested sequence of trees, grammar strings or numbers."""
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValidationError("symbol must be a 2x2 matrix")
        return cls(tuple(tuple(_coerce_entry(e) for e in row) for row in rows))  # type: ignore[arg-type]

    @classmethod
    def from_blocks(cls, points: npt.ArrayLike, blocks: npt.ArrayLike) -> SymbolMatrix:
        """Tabulated symbol from an array of 2x2 blocks, one per point."""
        pts = tuple(float(p) for p in np.asarray(points, dtype=np.float64))
        arr = np.asarray(blocks, dtype=np.complex128).reshape(len(pts), 2, 2)
        return cls(
            tuple(
                tuple(PointTable(pts, tuple(arr[:, i, j])) for j in range(2)) for i in range(2)
            )  # type: ignore[arg-type]
        )

    @property
    def is_tabulated(self) -> bool:
        return any(isinstance(e, PointTable) for row in self.entries for e in row)

    def at(self, xs: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """Evaluated blocks, shape ``(len(xs), 2, 2)``."""
        points = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        out = np.empty((points.size, 2, 2), dtype=np.complex128)
        for i in range(2):
            for j in range(2):
                out[:, i, j] = _entry_values(self.entries[i][j], points)
        return out

    def adjoint(self) -> SymbolMatrix:
        def star(entry: SymbolEntry) -> SymbolEntry:
            return entry.conjugate() if isinstance(entry, PointTable) else ex.conj(entry)

        (a, b), (c, d) = self.entries
        return SymbolMatrix(((star(a), star(c)), (star(b), star(d))))

    def formatted(self) -> list[list[str]]:
        return [
            ["<table>" if isinstance(e, PointTable) else ex.format_expr(e) for e in row] for row in self.entries
        ]


def _coerce_entry(entry: Any) -> SymbolEntry:
    if isinstance(entry, (PointTable, ex.Const, ex.Var, ex.Binary, ex.Power, ex.Unary)):
        return entry
    if isinstance(entry, str):
        return ex.parse(entry)
    if isinstance(entry, (int, float, complex)):
        return ex.constant(entry)
    raise ValidationError(f"Cannot use {entry!r} as a symbol entry")


@dataclass(frozen=True)
class WStarElement:
    """Scalars on the present M_ij, a symbol on M (+) M, and the model of sigma(H)."""

    scalars: Mapping[Index, complex]
    symbol: SymbolMatrix
    model: SpectralModel = field(default_factory=SpectralModel)

    @property
    def present(self) -> frozenset[Index]:
        return frozenset(self.scalars)

    @property
    def scalar_max(self) -> float | None:
        """max |a_ij| over Lambda, None when Lambda is empty."""
        if not self.scalars:
            return None
        return max(abs(v) for v in self.scalars.values())


@dataclass(frozen=True)
class SymbolSample:
    x: float
    phi: float
    omega: complex
    psi: float
    radicand: float


# -- construction ----------------------------------------------------------------


def _normalise_scalars(scalars: Mapping[Any, Any]) -> dict[Index, complex]:
    out: dict[Index, complex] = {}
    for key, value in scalars.items():
        index = tuple(int(k) for k in key) if not isinstance(key, str) else (int(key[0]), int(key[1]))
        if index not in SUBSPACES:
            raise ValidationError(f"scalars: unknown subspace index {key!r}")
        v = complex(value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValidationError(f"scalars: a_{index[0]}{index[1]} must be finite")
        out[index] = v  # type: ignore[index]
    return {k: out[k] for k in SUBSPACES if k in out}


def build_element(
    scalars: Mapping[Any, Any],
    symbol: SymbolMatrix | Sequence[Sequence[Any]],
    model: SpectralModel,
    grid: int = VALIDATION_GRID,
) -> WStarElement:
    """Validate and assemble an element.

    The symbol is evaluated on every atom, every limit point and ``grid``
    points of each interval; any EvalError propagates with the offending x.
    """
    sym = symbol if isinstance(symbol, SymbolMatrix) else SymbolMatrix.of(symbol)
    if sym.is_tabulated and model.has_essential:
        raise ValidationError("symbol: point tables are undefined on essential components")
    element = WStarElement(scalars=_normalise_scalars(scalars), symbol=sym, model=model)
    if not model.is_empty:
        sym.at(model.validation_points(grid))
    return element


def identity(model: SpectralModel, present: frozenset[Index] | set[Index] = frozenset()) -> WStarElement:
    return WStarElement(
        scalars={k: 1.0 + 0j for k in SUBSPACES if k in present},
        symbol=SymbolMatrix(((ex.ONE, ex.ZERO), (ex.ZERO, ex.ONE))),
        model=model,
    )


# -- sampling --------------------------------------------------------------------


def sample_symbol(
    element: WStarElement, xs: npt.ArrayLike
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.complex128], npt.NDArray[np.float64]]:
    """Vectorised phi, omega and psi at the given points.

    psi uses the eigenvalue gap of Phi*Phi, ``(p - s)^2 + 4|r|^2``, which equals
    ``phi^2 - 4|omega|^2`` but has no cancellation. The naive radicand is still
    checked against the ``-1e-12 (1 + phi^2)`` floor.
    """
    points = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    blocks = element.symbol.at(points)
    phi, omega, psi, radicand = _psi_parts(blocks)
    floor = -RADICAND_RTOL * (1.0 + phi**2)
    bad = radicand < floor
    if np.any(bad):
        k = int(np.argmax(bad))
        raise RadicandNegative(f"phi^2 - 4|omega|^2 = {radicand[k]:.3e} at x={points[k]!r}")
    clamped = radicand < 0.0
    if np.any(clamped):
        k = int(np.argmin(radicand))
        logger.warning(
            "Radicand below 0 within roundoff at %d point(s), clamped to 0; smallest %.3e at x=%r",
            int(np.count_nonzero(clamped)),
            radicand[k],
            points[k],
        )
    return phi, omega, psi


def _psi_parts(blocks: npt.NDArray[np.complex128]):
    a, b = blocks[:, 0, 0], blocks[:, 0, 1]
    c, d = blocks[:, 1, 0], blocks[:, 1, 1]
    p = np.abs(a) ** 2 + np.abs(c) ** 2
    s = np.abs(b) ** 2 + np.abs(d) ** 2
    r = np.conj(a) * b + np.conj(c) * d
    phi = p + s
    omega = a * d - b * c
    gap = np.sqrt((p - s) ** 2 + 4.0 * np.abs(r) ** 2)
    radicand = phi**2 - 4.0 * np.abs(omega) ** 2
    return phi, omega, phi + gap, radicand


def symbol_at(element: WStarElement, x: float) -> SymbolSample:
    """phi, omega and psi of the symbol at a single point of [0,1]."""
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"symbol_at needs x in [0,1], got {x!r}")
    phi, omega, psi = sample_symbol(element, [x])
    radicand = float(phi[0] ** 2 - 4.0 * abs(omega[0]) ** 2)
    return SymbolSample(x=float(x), phi=float(phi[0]), omega=complex(omega[0]), psi=float(psi[0]), radicand=radicand)


# -- algebra ---------------------------------------------------------------------


def _check_compatible(a: WStarElement, b: WStarElement) -> None:
    if a.model != b.model:
        raise ModelMismatch("Elements live on different spectral models")
    if a.present != b.present:
        raise ModelMismatch(f"Elements have different present subspaces: {sorted(a.present)} vs {sorted(b.present)}")


def _tabulate(element: WStarElement) -> npt.NDArray[np.complex128]:
    if element.model.has_essential:
        raise ValidationError("Point tables are undefined on essential components")
    return element.symbol.at(element.model.atom_values)


def adjoint(element: WStarElement) -> WStarElement:
    """A*: conjugated scalars, conjugate-transposed symbol."""
    return WStarElement(
        scalars={k: v.conjugate() for k, v in element.scalars.items()},
        symbol=element.symbol.adjoint(),
        model=element.model,
    )


def multiply(a: WStarElement, b: WStarElement) -> WStarElement:
    """AB, with the 2x2 symbol product built as sum-of-products trees."""
    _check_compatible(a, b)
    scalars = {k: a.scalars[k] * b.scalars[k] for k in a.scalars}
    if a.symbol.is_tabulated or b.symbol.is_tabulated:
        points = a.model.atom_values
        symbol = SymbolMatrix.from_blocks(points, _tabulate(a) @ _tabulate(b))
    else:
        (a00, a01), (a10, a11) = a.symbol.entries
        (b00, b01), (b10, b11) = b.symbol.entries
        symbol = SymbolMatrix(
            (
                (ex.add(ex.mul(a00, b00), ex.mul(a01, b10)), ex.add(ex.mul(a00, b01), ex.mul(a01, b11))),
                (ex.add(ex.mul(a10, b00), ex.mul(a11, b10)), ex.add(ex.mul(a10, b01), ex.mul(a11, b11))),
            )  # type: ignore[arg-type]
        )
    return WStarElement(scalars=scalars, symbol=symbol, model=a.model)


def add(a: WStarElement, b: WStarElement) -> WStarElement:
    _check_compatible(a, b)
    scalars = {k: a.scalars[k] + b.scalars[k] for k in a.scalars}
    if a.symbol.is_tabulated or b.symbol.is_tabulated:
        symbol = SymbolMatrix.from_blocks(a.model.atom_values, _tabulate(a) + _tabulate(b))
    else:
        symbol = SymbolMatrix(
            tuple(
                tuple(ex.add(x, y) for x, y in zip(row_a, row_b))
                for row_a, row_b in zip(a.symbol.entries, b.symbol.entries)
            )  # type: ignore[arg-type]
        )
    return WStarElement(scalars=scalars, symbol=symbol, model=a.model)


def scale(element: WStarElement, factor: complex) -> WStarElement:
    factor = complex(factor)
    scalars = {k: factor * v for k, v in element.scalars.items()}
    if element.symbol.is_tabulated:
        symbol = SymbolMatrix.from_blocks(element.model.atom_values, factor * _tabulate(element))
    else:
        c = ex.constant(factor)
        entries = element.symbol.entries
        symbol = SymbolMatrix(tuple(tuple(ex.mul(c, e) for e in row) for row in entries))  # type: ignore[arg-type]
    return WStarElement(scalars=scalars, symbol=symbol, model=element.model)


def norm(element: WStarElement, **search: Any) -> float:
    """||A|| = max(max |a_ij|, sqrt(lambda_max)).

    ``search`` is forwarded to :func:`normattain.attain.lambda_max`.
    """
    from normattain.attain.maximize import lambda_max

    scalar = element.scalar_max
    if element.model.is_empty:
        return scalar if scalar is not None else 0.0
    root = math.sqrt(lambda_max(element, **search).value)
    return root if scalar is None else max(scalar, root)
