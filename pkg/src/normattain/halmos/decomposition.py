"""Canonical two-projection decomposition of a concrete pair (P, Q).

The space splits into M_00 = Ran P & Ran Q, M_01 = Ran P & Ker Q,
M_10 = Ker P & Ran Q, M_11 = Ker P & Ker Q and two copies of a generic
subspace M. On M (+) M, P = diag(I, 0) and Q is the 2x2 block matrix
[[I - H, sqrt(H(I-H))], [sqrt(H(I-H)), H]] with 0 < H < 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from normattain.errors import DegenerateSpectrum, NotInAlgebra, NotProjection, PairingFailure, ValidationError
from normattain.linalg.dense import (
    MAX_SWEEPS,
    ComplexMatrix,
    as_matrix,
    check_orthogonal_projection,
    hermitian_eig,
    max_abs,
    orthonormal_range,
)
from normattain.symbol.element import SUBSPACES, SymbolMatrix, WStarElement
from normattain.symbol.model import SpectralModel

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_CLASSIFY_EPS = 1e-8


@dataclass(frozen=True)
class HalmosDecomposition:
    """Orthonormal column families of the six summands plus the spectrum of H."""

    m00: ComplexMatrix
    m01: ComplexMatrix
    m10: ComplexMatrix
    m11: ComplexMatrix
    generic_first: ComplexMatrix
    generic_second: ComplexMatrix
    h_values: npt.NDArray[np.float64]

    @property
    def dimension(self) -> int:
        return int(self.m00.shape[0])

    @property
    def generic_size(self) -> int:
        return int(self.h_values.size)

    def family(self, index: tuple[int, int]) -> ComplexMatrix:
        return {(0, 0): self.m00, (0, 1): self.m01, (1, 0): self.m10, (1, 1): self.m11}[index]

    @property
    def present(self) -> frozenset[tuple[int, int]]:
        """Lambda: indices of the nonzero M_ij."""
        return frozenset(k for k in SUBSPACES if self.family(k).shape[1] > 0)

    def sizes(self) -> dict[str, int]:
        out = {f"m{i}{j}": int(self.family((i, j)).shape[1]) for i, j in SUBSPACES}
        out["generic"] = self.generic_size
        return out

    def basis(self) -> ComplexMatrix:
        """Unitary whose columns run through M_00, M_01, M_10, M_11, first copy, second copy."""
        return np.hstack([self.m00, self.m01, self.m10, self.m11, self.generic_first, self.generic_second])


def decompose(
    p: ComplexMatrix,
    q: ComplexMatrix,
    tol: float = DEFAULT_TOL,
    classify_eps: float = DEFAULT_CLASSIFY_EPS,
    max_sweeps: int = MAX_SWEEPS,
) -> HalmosDecomposition:
    """Split the space for the pair (P, Q).

    Eigenvalues mu of PQP on Ran P near 1 give M_00, near 0 give M_01, and
    otherwise h = 1 - mu with eigenvector e in the first copy of M, paired
    with f = (I - P) Q e / sqrt(h (1 - h)) in the second copy. Eigenvalues of
    (I-P)Q(I-P) on Ker P near 1 give M_10 and near 0 give M_11.
    """
    p = as_matrix(p)
    q = as_matrix(q)
    n = p.shape[0]
    if p.shape != (n, n) or q.shape != (n, n):
        raise NotProjection(f"P and Q must be square of equal size, got {p.shape} and {q.shape}")
    for name, m in (("P", p), ("Q", q)):
        if not check_orthogonal_projection(m, tol * max(1.0, float(n))):
            raise NotProjection(f"{name} is not an orthogonal projection within tol={tol:g}")

    ident = np.eye(n, dtype=np.complex128)
    ran_p = orthonormal_range(p, tol)
    ker_p = orthonormal_range(ident - p, tol)

    upper = hermitian_eig(ran_p.conj().T @ q @ ran_p, tol, max_sweeps)
    vectors = ran_p @ upper.vectors
    mu = upper.values
    to_m00 = mu >= 1.0 - classify_eps
    to_m01 = mu <= classify_eps
    generic = ~(to_m00 | to_m01)

    h = 1.0 - mu[generic]
    first = vectors[:, generic]
    order = np.argsort(h, kind="stable")
    h, first = h[order], first[:, order]
    second = np.empty_like(first)
    for k in range(h.size):
        f = (ident - p) @ q @ first[:, k] / np.sqrt(h[k] * (1.0 - h[k]))
        deviation = abs(float(np.linalg.norm(f)) - 1.0)
        if deviation > 10.0 * tol:
            raise PairingFailure(f"Second-copy vector for h={h[k]:.6g} has norm off by {deviation:.3e}")
        second[:, k] = f / np.linalg.norm(f)

    lower = hermitian_eig(ker_p.conj().T @ q @ ker_p, tol, max_sweeps)
    lower_vectors = ker_p @ lower.vectors
    m10 = lower_vectors[:, lower.values >= 1.0 - classify_eps]
    m11 = lower_vectors[:, lower.values <= classify_eps]

    decomposition = HalmosDecomposition(
        m00=vectors[:, to_m00],
        m01=vectors[:, to_m01],
        m10=m10,
        m11=m11,
        generic_first=first,
        generic_second=second,
        h_values=h,
    )
    # sizes() counts the generic part once; it occupies two copies.
    total = sum(decomposition.sizes().values()) + decomposition.generic_size
    if total != n:
        raise PairingFailure(f"Dimension bookkeeping failed: summands add up to {total}, space has {n}")
    logger.debug("Decomposed n=%d: %s", n, decomposition.sizes())
    return decomposition


def _block_matrix(d: HalmosDecomposition, scalars: dict[tuple[int, int], complex], blocks: np.ndarray) -> ComplexMatrix:
    """Matrix in the decomposition basis rotated back to the original coordinates."""
    diag = []
    for key in SUBSPACES:
        size = d.family(key).shape[1]
        diag += [scalars.get(key, 0.0)] * size
    k = len(diag)
    m = d.generic_size
    inner = np.zeros((k + 2 * m, k + 2 * m), dtype=np.complex128)
    inner[np.arange(k), np.arange(k)] = diag
    idx = np.arange(m)
    inner[k + idx, k + idx] = blocks[:, 0, 0]
    inner[k + idx, k + m + idx] = blocks[:, 0, 1]
    inner[k + m + idx, k + idx] = blocks[:, 1, 0]
    inner[k + m + idx, k + m + idx] = blocks[:, 1, 1]
    w = d.basis()
    return w @ inner @ w.conj().T


def reconstruct(d: HalmosDecomposition) -> tuple[ComplexMatrix, ComplexMatrix]:
    """P and Q rebuilt from the decomposition."""
    h = d.h_values
    zeros = np.zeros_like(h)
    ones = np.ones_like(h)
    off = np.sqrt(h * (1.0 - h))
    p_blocks = np.stack([np.stack([ones, zeros], -1), np.stack([zeros, zeros], -1)], -2)
    q_blocks = np.stack([np.stack([1.0 - h, off], -1), np.stack([off, h], -1)], -2)
    p = _block_matrix(d, {(0, 0): 1.0, (0, 1): 1.0}, p_blocks)
    q = _block_matrix(d, {(0, 0): 1.0, (1, 0): 1.0}, q_blocks)
    return p, q


def model_of(d: HalmosDecomposition) -> SpectralModel:
    """Atom-only model of H; requires pairwise distinct h values."""
    h = d.h_values
    if h.size > 1 and np.min(np.diff(h)) <= 0.0:
        raise DegenerateSpectrum("h values repeat; the atom model needs a simple spectrum")
    return SpectralModel.from_atoms(h)


def assemble(d: HalmosDecomposition, element: WStarElement) -> ComplexMatrix:
    """Concrete matrix of an element; its symbol is evaluated at the h values."""
    missing = d.present - element.present
    if missing:
        raise ValidationError(f"Element lacks scalars for present subspaces {sorted(missing)}")
    scalars = {k: v for k, v in element.scalars.items() if k in d.present}
    blocks = element.symbol.at(d.h_values) if d.generic_size else np.zeros((0, 2, 2), dtype=np.complex128)
    return _block_matrix(d, scalars, blocks)


def extract_symbol(d: HalmosDecomposition, a: ComplexMatrix, tol: float = DEFAULT_TOL) -> WStarElement:
    """Read the scalars and tabulated symbol of A off the decomposition.

    Raises:
        DegenerateSpectrum: h values collide within ``tol``.
        NotInAlgebra: A is not a scalar on some M_ij, or does not match the
            assembled element within ``tol * max|A|``.
    """
    a = as_matrix(a)
    h = d.h_values
    if h.size > 1 and np.min(np.diff(h)) <= tol:
        raise DegenerateSpectrum(f"h values collide within tol={tol:g}; multiplicities are not supported")
    scale = max(max_abs(a), np.finfo(float).tiny)

    scalars: dict[tuple[int, int], complex] = {}
    for key in sorted(d.present):
        basis = d.family(key)
        block = basis.conj().T @ a @ basis
        value = complex(np.trace(block) / block.shape[0])
        if max_abs(block - value * np.eye(block.shape[0])) > tol * scale:
            raise NotInAlgebra(f"A is not a scalar on M_{key[0]}{key[1]}")
        scalars[key] = value

    e, f = d.generic_first, d.generic_second
    blocks = np.empty((h.size, 2, 2), dtype=np.complex128)
    blocks[:, 0, 0] = np.einsum("ik,ij,jk->k", e.conj(), a, e)
    blocks[:, 0, 1] = np.einsum("ik,ij,jk->k", e.conj(), a, f)
    blocks[:, 1, 0] = np.einsum("ik,ij,jk->k", f.conj(), a, e)
    blocks[:, 1, 1] = np.einsum("ik,ij,jk->k", f.conj(), a, f)

    element = WStarElement(
        scalars=scalars,
        symbol=SymbolMatrix.from_blocks(h, blocks),
        model=SpectralModel.from_atoms(h),
    )
    residual = max_abs(a - assemble(d, element))
    if residual > tol * scale:
        raise NotInAlgebra(f"A is not in W*(P,Q): residual {residual:.3e} exceeds {tol * scale:.3e}")
    return element
