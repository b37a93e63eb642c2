"""Randomised suites tying the symbol machinery to dense linear algebra.

Trial k draws from its own stream ``SeedSequence(seed).spawn(trials)[k]``, so
results do not depend on the order in which trials run.
"""

from __future__ import annotations

import logging

import numpy as np

from normattain import expr as ex
from normattain.attain.criteria import is_eigenvalue, kernel_nontrivial
from normattain.halmos.decomposition import reconstruct
from normattain.symbol.element import SUBSPACES, SymbolMatrix, WStarElement
from normattain.symbol.model import SpectralModel
from normattain.verify.oracles import (
    DEFAULT_SUITE_TOL,
    TrialReport,
    assemble_finite,
    crosscheck_norm,
    generator,
    random_decomposition,
    random_element_spec,
    reconstruction_residual,
)

logger = logging.getLogger(__name__)

NULLITY_RTOL = 1e-9
EIGEN_RTOL = 1e-8
FAR_POINT = 10.0 + 10.0j
MAX_ATOMS = 6


def _streams(seed: int, trials: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(trials)


def run_random_suite(
    n: int,
    trials: int,
    seed: int,
    suite_tol: float = DEFAULT_SUITE_TOL,
    tol: float = 1e-10,
) -> TrialReport:
    """Norm oracle and decompose -> reconstruct round trip on ``trials`` random pairs in C^n."""
    report = TrialReport(seed=seed, dimension=n, tol=suite_tol, name="random")
    for trial, stream in enumerate(_streams(seed, trials)):
        rng = generator(stream)
        p, q = reconstruct(random_decomposition(n, rng))
        spec = random_element_spec(rng)
        report.merge(crosscheck_norm(p, q, spec, seed=seed, tol=tol, suite_tol=suite_tol, trial=trial))
        report.record(trial, "reconstruct", 0.0, None, reconstruction_residual(p, q, tol))
    logger.info(
        "Random suite n=%d trials=%d seed=%d: max_residual=%.3e failures=%d",
        n,
        trials,
        seed,
        report.max_residual,
        len(report.failures),
    )
    return report


def _random_atoms(rng: np.random.Generator, count: int) -> np.ndarray:
    slots = rng.choice(89, size=count, replace=False)
    return np.sort(0.05 + 0.01 * slots)


def _nullity(matrix: np.ndarray) -> int:
    s = np.linalg.svd(matrix, compute_uv=False)
    return int(np.count_nonzero(s <= NULLITY_RTOL * max(1.0, float(s[0]))))


def kernel_oracle_suite(trials: int = 200, seed: int = 0) -> TrialReport:
    """{omega = 0} has mass iff the dense matrix is singular.

    The symbol rows are (u, v) and lam (u, v) + (x - t)(w, z), so omega equals
    (x - t)(uz - vw) and vanishes exactly at t. Half of the trials put t on an
    atom.
    """
    report = TrialReport(seed=seed, dimension=0, tol=0.5, name="kernel")
    for trial, stream in enumerate(_streams(seed, trials)):
        rng = generator(stream)
        atoms = _random_atoms(rng, int(rng.integers(1, MAX_ATOMS + 1)))
        u, v, w, z, lam = (complex(*rng.standard_normal(2)) for _ in range(5))
        while abs(u * z - v * w) < 0.1:
            w, z = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        t = float(rng.choice(atoms)) if rng.random() < 0.5 else float(rng.choice(atoms)) + 0.005

        shift = ex.sub(ex.X, ex.constant(t))
        row = (ex.constant(u), ex.constant(v))
        symbol = SymbolMatrix(
            (
                row,
                (
                    ex.add(ex.mul(ex.constant(lam), row[0]), ex.mul(shift, ex.constant(w))),
                    ex.add(ex.mul(ex.constant(lam), row[1]), ex.mul(shift, ex.constant(z))),
                ),
            )
        )
        element = WStarElement(scalars={}, symbol=symbol, model=SpectralModel.from_atoms(atoms))
        dense = _nullity(assemble_finite(element)) >= 1
        got = kernel_nontrivial(element)
        report.trials += 1
        report.dimension = max(report.dimension, 2 * len(atoms))
        report.record(trial, "kernel", dense, got, float(dense != got))
    logger.info("Kernel oracle: %d trial(s), %d failure(s)", trials, len(report.failures))
    return report


def _quadratic_roots(blocks: np.ndarray) -> np.ndarray:
    trace = blocks[:, 0, 0] + blocks[:, 1, 1]
    det = blocks[:, 0, 0] * blocks[:, 1, 1] - blocks[:, 0, 1] * blocks[:, 1, 0]
    disc = np.sqrt(trace * trace / 4.0 - det + 0j)
    return np.concatenate((trace / 2.0 + disc, trace / 2.0 - disc))


def _max_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Largest relative distance from a point of ``a`` to the set ``b``."""
    if a.size == 0:
        return 0.0
    gaps = np.abs(a[:, None] - b[None, :]).min(axis=1) / (1.0 + np.abs(a))
    return float(gaps.max())


def eigenvalue_oracle_suite(trials: int = 200, seed: int = 0) -> TrialReport:
    """Dense eigenvalues equal the per-atom roots of lam^2 - tr lam + det plus the scalars."""
    report = TrialReport(seed=seed, dimension=0, tol=EIGEN_RTOL, name="eigenvalue")
    for trial, stream in enumerate(_streams(seed, trials)):
        rng = generator(stream)
        atoms = _random_atoms(rng, int(rng.integers(1, MAX_ATOMS + 1)))
        spec = random_element_spec(rng)
        present = frozenset(k for k in SUBSPACES if rng.random() < 0.5)
        element = spec.element(SpectralModel.from_atoms(atoms), present)

        dense = np.linalg.eigvals(assemble_finite(element))
        predicted = np.concatenate(
            (_quadratic_roots(element.symbol.at(atoms)), np.array(list(element.scalars.values()), dtype=complex))
        )
        gap = max(_max_distance(dense, predicted), _max_distance(predicted, dense))
        report.trials += 1
        report.dimension = max(report.dimension, dense.size)
        report.record(trial, "spectrum", 0.0, gap, gap)

        misses = sum(not is_eigenvalue(element, lam) for lam in predicted)
        report.record(trial, "is_eigenvalue", 0, misses, float(misses))
        far = is_eigenvalue(element, FAR_POINT)
        report.record(trial, "far_point", False, far, float(far))
    logger.info("Eigenvalue oracle: %d trial(s), %d failure(s)", trials, len(report.failures))
    return report
