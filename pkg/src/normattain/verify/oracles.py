"""Dense oracles: random projection pairs, finite assemblies and SVD norm checks.

Randomness comes from ``numpy.random.Generator(PCG64(seed))`` so that a
(seed, n) pair always reproduces the same matrices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Union

import numpy as np
import numpy.typing as npt

from normattain import expr as ex
from normattain.errors import ValidationError
from normattain.halmos.decomposition import (
    HalmosDecomposition,
    assemble,
    decompose,
    extract_symbol,
    model_of,
    reconstruct,
)
from normattain.linalg.dense import ComplexMatrix, as_matrix, largest_singular_value, max_abs
from normattain.skew.analysis import skew_element
from normattain.skew.families import Ex3Variant, example3_atoms, example3_model
from normattain.symbol.element import SUBSPACES, SymbolMatrix, WStarElement, norm
from normattain.symbol.model import SpectralModel

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.SeedSequence]

DEFAULT_SUITE_TOL = 1e-9
H_LOW, H_HIGH = 0.05, 0.95
H_SLOTS = 91
H_JITTER = 0.004


@dataclass(frozen=True)
class TrialFailure:
    trial: int
    quantity: str
    expected: Any
    got: Any


@dataclass
class TrialReport:
    """Outcome of one oracle run; ``failures`` is empty iff ``max_residual <= tol``."""

    seed: int
    dimension: int
    max_residual: float = 0.0
    failures: list[TrialFailure] = field(default_factory=list)
    trials: int = 0
    tol: float = DEFAULT_SUITE_TOL
    name: str = "norm"

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, trial: int, quantity: str, expected: Any, got: Any, residual: float) -> None:
        self.max_residual = max(self.max_residual, float(residual))
        if residual > self.tol:
            self.failures.append(TrialFailure(trial, quantity, expected, got))

    def merge(self, other: TrialReport) -> None:
        self.max_residual = max(self.max_residual, other.max_residual)
        self.failures.extend(other.failures)
        self.trials += other.trials

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "seed": self.seed,
            "dimension": self.dimension,
            "trials": self.trials,
            "tol": self.tol,
            "max_residual": self.max_residual,
            "passed": self.passed,
            "failures": [
                {"trial": f.trial, "quantity": f.quantity, "expected": _plain(f.expected), "got": _plain(f.got)}
                for f in self.failures
            ],
        }


def _plain(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (int, float, np.integer, np.floating)):
        return float(value)
    return str(value)


def generator(seed: Seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


# -- random projection pairs -----------------------------------------------------


def random_unitary(n: int, rng: np.random.Generator) -> ComplexMatrix:
    """Haar unitary: QR of a complex Gaussian with the phases of R moved into Q."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_decomposition(n: int, rng: np.random.Generator) -> HalmosDecomposition:
    """Random canonical decomposition: a generic part of size >= 1 when n >= 4 and separated h values."""
    if n < 2:
        raise ValidationError(f"Random projection pairs need n >= 2, got {n}")
    m = int(rng.integers(1 if n >= 4 else 0, n // 2 + 1))
    rest = n - 2 * m
    sizes = rng.multinomial(rest, [0.25] * 4) if rest else np.zeros(4, dtype=int)
    slots = np.sort(rng.choice(H_SLOTS, size=m, replace=False))
    h = np.linspace(H_LOW, H_HIGH, H_SLOTS)[slots] + rng.uniform(-H_JITTER, H_JITTER, size=m)

    u = random_unitary(n, rng)
    bounds = np.cumsum([0, *sizes, m, m])
    cols = [u[:, bounds[k] : bounds[k + 1]] for k in range(6)]
    return HalmosDecomposition(
        m00=cols[0],
        m01=cols[1],
        m10=cols[2],
        m11=cols[3],
        generic_first=cols[4],
        generic_second=cols[5],
        h_values=h,
    )


def random_projection_pair(n: int, seed: Seed) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Deterministic random pair (P, Q) of orthogonal projections on C^n."""
    return reconstruct(random_decomposition(n, generator(seed)))


# -- random elements -------------------------------------------------------------


@dataclass(frozen=True)
class ElementSpec:
    """Scalars for every M_ij plus four expression entries of the symbol."""

    scalars: dict[tuple[int, int], complex]
    symbol: tuple[tuple[ex.Expr, ex.Expr], tuple[ex.Expr, ex.Expr]]

    def element(self, model: SpectralModel, present: frozenset[tuple[int, int]]) -> WStarElement:
        return WStarElement(
            scalars={k: v for k, v in self.scalars.items() if k in present},
            symbol=SymbolMatrix(self.symbol),  # type: ignore[arg-type]
            model=model,
        )


def _complex_normal(rng: np.random.Generator) -> complex:
    return complex(rng.standard_normal(), rng.standard_normal())


def random_polynomial(rng: np.random.Generator, degree: int = 2) -> ex.Expr:
    """c0 + c1 x + ... + c_d x^d with complex Gaussian coefficients."""
    tree = ex.constant(_complex_normal(rng))
    for k in range(1, degree + 1):
        term = ex.mul(ex.constant(_complex_normal(rng)), ex.X if k == 1 else ex.power(ex.X, k))
        tree = ex.add(tree, term)
    return tree


def random_element_spec(rng: np.random.Generator) -> ElementSpec:
    degrees = rng.integers(0, 3, size=4)
    entries = [random_polynomial(rng, int(d)) for d in degrees]
    return ElementSpec(
        scalars={k: _complex_normal(rng) for k in SUBSPACES},
        symbol=((entries[0], entries[1]), (entries[2], entries[3])),
    )


# -- oracles ---------------------------------------------------------------------


def crosscheck_norm(
    p: ComplexMatrix,
    q: ComplexMatrix,
    spec: ElementSpec,
    seed: int = 0,
    tol: float = 1e-10,
    suite_tol: float = DEFAULT_SUITE_TOL,
    trial: int = 0,
) -> TrialReport:
    """Compare the SVD norm of the assembled matrix with the symbol norm of the extracted element."""
    d = decompose(p, q, tol)
    element = spec.element(model_of(d), d.present)
    a = assemble(d, element)
    extracted = extract_symbol(d, a, tol)
    dense = largest_singular_value(a)
    formula = norm(extracted)
    report = TrialReport(seed=seed, dimension=d.dimension, trials=1, tol=suite_tol)
    report.record(trial, "norm", dense, formula, abs(formula - dense) / (dense if dense > 0.0 else 1.0))
    return report


def assemble_finite(element: WStarElement) -> ComplexMatrix:
    """Dense matrix of an atom-only element.

    Each present M_ij is one-dimensional; each atom contributes the 2x2 block
    of the symbol at that atom. Blocks are laid out along the diagonal.
    """
    model = element.model
    if model.has_essential:
        raise ValidationError("assemble_finite needs an atom-only spectral model")
    scalars = [element.scalars[k] for k in SUBSPACES if k in element.scalars]
    blocks = element.symbol.at(model.atom_values) if model.atoms else np.zeros((0, 2, 2), dtype=np.complex128)
    k = len(scalars)
    n = k + 2 * len(blocks)
    out = np.zeros((n, n), dtype=np.complex128)
    out[np.arange(k), np.arange(k)] = scalars
    for j, block in enumerate(blocks):
        s = k + 2 * j
        out[s : s + 2, s : s + 2] = block
    return out


def truncation_norms(variant: Ex3Variant | str, dims: npt.ArrayLike, operator: str = "A") -> list[float]:
    """Spectral norms of the 2n x 2n truncations of T or A = TT* + T*T - T - T* - I.

    Args:
        variant: Which sequence of atoms x_n.
        dims: Ascending counts n of leading 2x2 blocks.
        operator: ``"A"`` or ``"T"``.
    """
    sizes = [int(n) for n in np.atleast_1d(dims)]
    if any(n < 1 for n in sizes) or sizes != sorted(sizes):
        raise ValidationError(f"dims must be ascending positive counts, got {sizes}")
    if operator not in ("A", "T"):
        raise ValidationError(f"operator must be 'A' or 'T', got {operator!r}")
    symbol = example3_model(variant, 1)[1].symbol if operator == "A" else skew_element(SpectralModel()).symbol
    atoms = example3_atoms(variant, sizes[-1] if sizes else 0)
    out = []
    for n in sizes:
        finite = WStarElement(scalars={}, symbol=symbol, model=SpectralModel.from_atoms(atoms[:n]))
        out.append(largest_singular_value(assemble_finite(finite)))
    logger.debug("Truncation norms %s: %s", variant, out)
    return out


def reconstruction_residual(p: ComplexMatrix, q: ComplexMatrix, tol: float = 1e-10) -> float:
    """Entrywise decompose -> reconstruct error for the pair."""
    p = as_matrix(p)
    q = as_matrix(q)
    p2, q2 = reconstruct(decompose(p, q, tol))
    return max(max_abs(p - p2), max_abs(q - q2))
