"""Finite descriptions of the spectrum of H and its spectral measure.

Atoms carry positive point mass. Limit points carry none. Intervals carry a
declared measure class because the measure itself is not part of the input.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
import numpy.typing as npt

from normattain.errors import ValidationError

VALIDATION_GRID = 1024


class MeasureClass(str, Enum):
    ABSOLUTELY_CONTINUOUS = "absolutely_continuous"
    UNSPECIFIED = "unspecified"


@dataclass(frozen=True)
class Atom:
    value: float
    label: str = ""


@dataclass(frozen=True)
class ClosedInterval:
    lo: float
    hi: float
    measure_class: MeasureClass = MeasureClass.ABSOLUTELY_CONTINUOUS

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class LimitPoint:
    value: float


EssentialComponent = Union[ClosedInterval, LimitPoint]


def _finite(value: float, what: str) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise ValidationError(f"{what} must be finite, got {value!r}")
    return v


@dataclass(frozen=True)
class SpectralModel:
    """Atoms plus essential components of sigma(H)."""

    atoms: tuple[Atom, ...] = ()
    essential: tuple[EssentialComponent, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "essential", tuple(self.essential))
        seen: set[float] = set()
        for atom in self.atoms:
            value = _finite(atom.value, "atom")
            if not 0.0 < value < 1.0:
                raise ValidationError(f"atom must lie in (0,1), got {value!r}")
            if value in seen:
                raise ValidationError(f"atom values must be pairwise distinct, {value!r} repeats")
            seen.add(value)
        for component in self.essential:
            if isinstance(component, ClosedInterval):
                lo = _finite(component.lo, "interval lo")
                hi = _finite(component.hi, "interval hi")
                if lo > hi:
                    raise ValidationError(f"interval needs lo <= hi, got [{lo!r}, {hi!r}]")
                if lo < 0.0 or hi > 1.0:
                    raise ValidationError(f"interval [{lo!r}, {hi!r}] must lie in [0,1]")
                MeasureClass(component.measure_class)
            elif isinstance(component, LimitPoint):
                value = _finite(component.value, "limit point")
                if not 0.0 <= value <= 1.0:
                    raise ValidationError(f"limit point must lie in [0,1], got {value!r}")
            else:
                raise ValidationError(f"Unknown essential component {component!r}")

    # -- constructors ------------------------------------------------------------

    @classmethod
    def from_atoms(cls, values: Iterable[float], labels: Sequence[str] | None = None) -> SpectralModel:
        values = [float(v) for v in values]
        names = list(labels) if labels is not None else [f"h{k}" for k in range(len(values))]
        return cls(atoms=tuple(Atom(v, name) for v, name in zip(values, names)))

    # -- views -------------------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.atoms and not self.essential

    @property
    def has_essential(self) -> bool:
        return bool(self.essential)

    @property
    def atom_values(self) -> npt.NDArray[np.float64]:
        return np.array([a.value for a in self.atoms], dtype=np.float64)

    @property
    def intervals(self) -> list[ClosedInterval]:
        return [c for c in self.essential if isinstance(c, ClosedInterval)]

    @property
    def limit_points(self) -> list[LimitPoint]:
        return [c for c in self.essential if isinstance(c, LimitPoint)]

    @property
    def minimum(self) -> float:
        """min sigma(H)."""
        candidates = [a.value for a in self.atoms]
        candidates += [p.value for p in self.limit_points]
        candidates += [iv.lo for iv in self.intervals]
        if not candidates:
            raise ValidationError("Empty spectral model has no minimum")
        return min(candidates)

    @property
    def minimum_is_atom(self) -> bool:
        """True iff min sigma(H) is an eigenvalue of H."""
        return any(a.value == self.minimum for a in self.atoms)

    def validation_points(self, grid: int = VALIDATION_GRID) -> npt.NDArray[np.float64]:
        """Atoms, limit points and ``grid`` points per interval."""
        chunks = [self.atom_values, np.array([p.value for p in self.limit_points], dtype=np.float64)]
        for iv in self.intervals:
            chunks.append(np.linspace(iv.lo, iv.hi, grid if iv.hi > iv.lo else 1))
        return np.concatenate(chunks) if chunks else np.zeros(0)
