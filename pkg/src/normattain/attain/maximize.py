"""Location of lambda_max = max psi/2 over sigma(H) and of the maximizer set Sigma(A)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

from normattain.errors import EmptyModel
from normattain.symbol.element import WStarElement, sample_symbol
from normattain.symbol.model import ClosedInterval, MeasureClass

logger = logging.getLogger(__name__)

DEFAULT_GRID = 4096
DEFAULT_REFINE = 40
DEFAULT_PLATEAU_RTOL = 1e-9
DEFAULT_MIN_RUN = 3
MAX_REFINED_PEAKS = 16
# Spread allowed across a plateau, relative to 1 + its height.
PLATEAU_FLAT_RTOL = 1e-13
PLATEAU_RESAMPLE = 4


class PointKind(str, Enum):
    ATOM = "atom"
    ESSENTIAL_INTERIOR = "essential_interior"
    LIMIT_POINT = "limit_point"
    INTERVAL_PLATEAU = "interval_plateau"


@dataclass(frozen=True)
class MaximizerPoint:
    """A maximizer of psi. Plateaus span ``[x, upper]`` inside one interval."""

    x: float
    kind: PointKind
    upper: float | None = None
    measure_class: MeasureClass | None = None

    @property
    def carries_mass(self) -> bool | None:
        """Spectral mass of the point set; None when the interval's class is unspecified."""
        if self.kind is PointKind.ATOM:
            return True
        if self.kind is PointKind.INTERVAL_PLATEAU:
            if self.measure_class is MeasureClass.ABSOLUTELY_CONTINUOUS:
                return True
            return None
        return False


@dataclass(frozen=True)
class MaximizerSet:
    value: float
    points: tuple[MaximizerPoint, ...]


def _half_psi(element: WStarElement, xs: npt.ArrayLike) -> npt.NDArray[np.float64]:
    _, _, psi = sample_symbol(element, xs)
    return 0.5 * psi


def runs(mask: npt.NDArray[np.bool_]) -> list[tuple[int, int]]:
    """Inclusive ``(start, end)`` index pairs of consecutive True entries."""
    if mask.size == 0:
        return []
    padded = np.concatenate(([False], mask, [False])).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    return [(int(s), int(e) - 1) for s, e in zip(edges[::2], edges[1::2])]


def _trisect(
    element: WStarElement, lo: npt.NDArray[np.float64], hi: npt.NDArray[np.float64], rounds: int
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Shrink every bracket toward its local maximum; all brackets advance together."""
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(rounds):
        third = (hi - lo) / 3.0
        m1 = lo + third
        m2 = hi - third
        values = _half_psi(element, np.concatenate((m1, m2)))
        f1, f2 = values[: lo.size], values[lo.size :]
        move_lo = f1 < f2
        lo = np.where(move_lo, m1, lo)
        hi = np.where(move_lo, hi, m2)
    x = 0.5 * (lo + hi)
    return x, _half_psi(element, x)


def _is_flat(element: WStarElement, lo: float, hi: float, samples: int) -> bool:
    """Resample ``[lo, hi]`` and require the values to agree to roundoff."""
    vals = _half_psi(element, np.linspace(lo, hi, samples))
    top = float(vals.max())
    return top - float(vals.min()) <= PLATEAU_FLAT_RTOL * (1.0 + abs(top))


def _interval_candidates(
    element: WStarElement,
    interval: ClosedInterval,
    grid: int,
    refine: int,
    plateau_rtol: float,
    min_run: int,
) -> list[tuple[float, MaximizerPoint]]:
    if interval.hi == interval.lo or grid < 2:
        x = interval.lo
        value = float(_half_psi(element, [x])[0])
        return [(value, MaximizerPoint(x, PointKind.ESSENTIAL_INTERIOR, measure_class=interval.measure_class))]

    xs = np.linspace(interval.lo, interval.hi, grid)
    vals = _half_psi(element, xs)
    tol = plateau_rtol * (1.0 + float(np.max(np.abs(vals))))

    left = np.concatenate(([-np.inf], vals[:-1]))
    right = np.concatenate((vals[1:], [-np.inf]))
    peaks = (vals >= left - tol) & (vals >= right - tol)

    plateaus: list[tuple[float, MaximizerPoint]] = []
    peak_indices: list[int] = []
    for start, end in runs(peaks):
        segment = vals[start : end + 1]
        top = float(segment.max())
        near = segment >= top - PLATEAU_FLAT_RTOL * (1.0 + abs(top))
        found = False
        for a, b in runs(near):
            count = b - a + 1
            x_lo, x_hi = float(xs[start + a]), float(xs[start + b])
            if count >= min_run and _is_flat(element, x_lo, x_hi, PLATEAU_RESAMPLE * count):
                plateaus.append(
                    (
                        float(segment[a : b + 1].max()),
                        MaximizerPoint(
                            x_lo, PointKind.INTERVAL_PLATEAU, upper=x_hi, measure_class=interval.measure_class
                        ),
                    )
                )
                found = True
        if not found:
            peak_indices.append(start + int(np.argmax(segment)))

    peak_indices.sort(key=lambda i: -vals[i])
    peak_indices = sorted(peak_indices[:MAX_REFINED_PEAKS])
    candidates = list(plateaus)
    if peak_indices:
        idx = np.array(peak_indices)
        lo = xs[np.maximum(idx - 1, 0)]
        hi = xs[np.minimum(idx + 1, grid - 1)]
        refined_x, refined_v = _trisect(element, lo, hi, refine)
        for k, i in enumerate(idx):
            if refined_v[k] > vals[i]:
                x, value = float(refined_x[k]), float(refined_v[k])
            else:
                x, value = float(xs[i]), float(vals[i])
            candidates.append(
                (value, MaximizerPoint(x, PointKind.ESSENTIAL_INTERIOR, measure_class=interval.measure_class))
            )
    logger.debug(
        "Interval [%g, %g]: %d plateau(s), %d refined peak(s)",
        interval.lo,
        interval.hi,
        len(plateaus),
        len(peak_indices),
    )
    return candidates


def lambda_max(
    element: WStarElement,
    grid: int = DEFAULT_GRID,
    refine: int = DEFAULT_REFINE,
    plateau_rtol: float = DEFAULT_PLATEAU_RTOL,
    min_run: int = DEFAULT_MIN_RUN,
) -> MaximizerSet:
    """Global maximum of psi/2 over the model and every point attaining it.

    Atoms and limit points are evaluated exactly; each interval gets ``grid``
    samples followed by ``refine`` trisection rounds around its grid peaks.
    A plateau needs ``min_run`` grid points that stay flat to roundoff, also
    after resampling; anything less steep is an isolated peak.
    Points within ``plateau_rtol * (1 + value)`` of the maximum form Sigma(A).
    """
    model = element.model
    if model.is_empty:
        raise EmptyModel("lambda_max needs a nonempty spectral model")

    candidates: list[tuple[float, MaximizerPoint]] = []
    if model.atoms:
        values = _half_psi(element, model.atom_values)
        candidates += [(float(v), MaximizerPoint(a.value, PointKind.ATOM)) for a, v in zip(model.atoms, values)]
    limits = model.limit_points
    if limits:
        values = _half_psi(element, [p.value for p in limits])
        candidates += [(float(v), MaximizerPoint(p.value, PointKind.LIMIT_POINT)) for p, v in zip(limits, values)]
    for interval in model.intervals:
        candidates += _interval_candidates(element, interval, grid, refine, plateau_rtol, min_run)

    value = max(v for v, _ in candidates)
    tol = plateau_rtol * (1.0 + abs(value))
    points = sorted(
        (p for v, p in candidates if v >= value - tol),
        key=lambda p: (p.x, p.kind.value),
    )
    logger.debug("lambda_max = %.15g attained at %d point(s)", value, len(points))
    return MaximizerSet(value=value, points=tuple(points))
