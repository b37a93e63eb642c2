"""Tests for skew projections and the operator families built from them."""

import math

import numpy as np
import pytest

from normattain.attain import PointKind, decide_attainment, norming_vector
from normattain.errors import AfriatViolation, NotIdempotent, NotSkew, ValidationError
from normattain.linalg import largest_singular_value
from normattain.skew import (
    Ex3Variant,
    alternating_power,
    analyze_skew,
    attains_norm,
    buckholtz,
    example3_atoms,
    example3_model,
    linear_family,
    skew_element,
)
from normattain.symbol import ClosedInterval, LimitPoint, SpectralModel, norm, sample_symbol, symbol_at

T2 = np.array([[1.0, -2.0], [0.0, 0.0]])
ONE_FIFTH = SpectralModel.from_atoms([0.2])


def _block_skew(*omegas: float) -> np.ndarray:
    n = 2 * len(omegas)
    t = np.zeros((n, n))
    for k, w in enumerate(omegas):
        t[2 * k, 2 * k] = 1.0
        t[2 * k, 2 * k + 1] = -w
    return t


class TestAnalyzeSkew:
    def test_two_by_two(self):
        analysis = analyze_skew(T2)
        assert analysis.pq_norm == pytest.approx(2 / math.sqrt(5))
        assert analysis.h_model.atom_values == pytest.approx([0.2])
        assert analysis.norm == pytest.approx(math.sqrt(5))
        assert analysis.afriat_residual < 1e-12
        assert analysis.t_symbol.present == frozenset()

    def test_projections(self):
        analysis = analyze_skew(T2)
        assert np.allclose(analysis.p, np.diag([1.0, 0.0]))
        assert np.allclose(analysis.q, [[0.8, 0.4], [0.4, 0.2]])

    def test_two_blocks(self):
        analysis = analyze_skew(_block_skew(math.sqrt(3), 1.0))
        assert analysis.h_model.atom_values == pytest.approx([0.25, 0.5])
        assert analysis.norm == pytest.approx(2.0)

    def test_with_m01_and_m10(self):
        t = np.zeros((4, 4))
        t[:2, :2] = T2
        t[2, 2] = 1.0
        analysis = analyze_skew(t)
        assert analysis.t_symbol.present == frozenset({(0, 1), (1, 0)})
        assert analysis.t_symbol.scalars[(0, 1)] == 1.0
        assert analysis.t_symbol.scalars[(1, 0)] == 0.0
        assert analysis.norm == pytest.approx(math.sqrt(5))

    def test_repeated_blocks_merge(self, caplog):
        analysis = analyze_skew(_block_skew(2.0, 2.0))
        assert analysis.h_model.atom_values == pytest.approx([0.2])
        assert "Merged" in caplog.text

    def test_not_idempotent(self):
        with pytest.raises(NotIdempotent):
            analyze_skew(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_orthogonal_projection_is_not_skew(self):
        with pytest.raises(NotSkew):
            analyze_skew(np.diag([1.0, 0.0]))


class TestSkewElement:
    def test_symbol(self):
        element = skew_element(ONE_FIFTH)
        assert np.allclose(element.symbol.at([0.2])[0], [[1.0, -2.0], [0.0, 0.0]])

    def test_zero_in_model(self):
        with pytest.raises(ValidationError):
            skew_element(SpectralModel(essential=(ClosedInterval(0.0, 0.5),)))

    def test_phi_omega(self):
        sample = symbol_at(skew_element(ONE_FIFTH), 0.2)
        assert sample.phi == pytest.approx(5.0)
        assert sample.omega == 0


class TestAttainsNorm:
    def test_minimum_atom(self):
        assert attains_norm(analyze_skew(T2)).attained

    def test_interval_minimum(self):
        model = SpectralModel(essential=(ClosedInterval(0.3, 0.9),))
        assert not attains_norm(model).attained

    def test_limit_point_minimum(self):
        model = SpectralModel(atoms=ONE_FIFTH.atoms, essential=(LimitPoint(0.1),))
        verdict = attains_norm(model)
        assert not verdict.attained
        assert verdict.sigma.points[0].kind is PointKind.LIMIT_POINT


class TestLinearFamily:
    def test_t_minus_identity(self):
        element = linear_family(ONE_FIFTH, 0.0, -1.0)
        sample = symbol_at(element, 0.2)
        assert sample.phi == pytest.approx(5.0)
        assert sample.omega == pytest.approx(0.0)

    def test_buckholtz(self):
        element = buckholtz(ONE_FIFTH)
        assert norm(element) == pytest.approx(math.sqrt(5), rel=1e-12)
        sample = symbol_at(element, 0.2)
        assert sample.phi == pytest.approx(10.0)
        assert sample.omega == pytest.approx(-5.0)

    def test_closed_forms_on_interval(self):
        model = SpectralModel(essential=(ClosedInterval(0.1, 0.9),))
        element = linear_family(model, 0.5, 2.0, grid=256)
        s = 1 + 0.5 + 2.0
        sample = symbol_at(element, 0.4)
        assert sample.phi == pytest.approx(s * s + 4.0 + 1.25 * (1 / 0.4 - 1), rel=1e-12)

    def test_with_m01_scalar(self):
        element = linear_family(ONE_FIFTH, 1.0, -1.0, m01=True)
        assert element.scalars[(0, 1)] == pytest.approx(1.0)


class TestAlternatingPower:
    def test_m_one_is_t(self):
        assert np.allclose(alternating_power(ONE_FIFTH, 1).symbol.at([0.2]), skew_element(ONE_FIFTH).symbol.at([0.2]))

    def test_even_powers(self):
        assert norm(alternating_power(ONE_FIFTH, 2)) == pytest.approx(5.0)
        assert norm(alternating_power(ONE_FIFTH, 4)) == pytest.approx(25.0)

    def test_odd_power(self):
        assert norm(alternating_power(ONE_FIFTH, 3)) == pytest.approx(5.0 * math.sqrt(5))

    def test_rejects_zero(self):
        with pytest.raises(ValidationError):
            alternating_power(ONE_FIFTH, 0)


class TestExample3:
    def test_atoms(self):
        assert example3_atoms("one_over_n", 3) == pytest.approx([1 / 2, 4 / 5, 9 / 10])
        assert example3_atoms(Ex3Variant.TWO_OVER_N, 3) == pytest.approx([1 / 5, 1 / 2, 9 / 13])

    def test_one_over_n_not_attained(self):
        model, a = example3_model("one_over_n", 64)
        verdict = decide_attainment(a)
        assert not verdict.attained
        assert verdict.lambda_max == pytest.approx(1.0)
        assert [p.kind for p in verdict.sigma.points] == [PointKind.LIMIT_POINT]
        assert model.limit_points[0].value == 1.0

    def test_two_over_n_attained(self):
        _, a = example3_model("two_over_n", 64)
        verdict = decide_attainment(a)
        assert verdict.attained
        assert verdict.lambda_max == pytest.approx(9.0)
        assert [(p.kind, p.x) for p in verdict.sigma.points] == [(PointKind.ATOM, pytest.approx(0.2))]

    def test_t_attains_on_first_atom(self):
        model, _ = example3_model("one_over_n", 16)
        verdict = attains_norm(model)
        assert verdict.attained
        assert verdict.norm == pytest.approx(math.sqrt(2))

    def test_rejects_empty(self):
        with pytest.raises(ValidationError):
            example3_model("two_over_n", 0)


class TestAfriat:
    def test_nearly_parallel_range_and_kernel(self):
        t = np.array([[1.0, -1e9], [0.0, 0.0]])
        with pytest.raises(AfriatViolation):
            analyze_skew(t)


GRID = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)


class TestVerdictEquivalence:
    @pytest.mark.parametrize("variant", ["one_over_n", "two_over_n"])
    def test_linear_family_matches_t(self, variant):
        model, _ = example3_model(variant, 64)
        expected = attains_norm(model).attained
        for alpha in GRID:
            for beta in GRID:
                verdict = decide_attainment(linear_family(model, alpha, beta))
                assert verdict.attained == expected, (alpha, beta)

    @pytest.mark.parametrize("variant", ["one_over_n", "two_over_n"])
    def test_alternating_powers_match_t(self, variant):
        model, _ = example3_model(variant, 64)
        expected = attains_norm(model).attained
        for m in range(1, 8):
            assert decide_attainment(alternating_power(model, m)).attained == expected, m

    def test_odd_power_reduces_to_double(self):
        model = SpectralModel(essential=(ClosedInterval(0.25, 0.75),))
        for k in range(3):
            odd = decide_attainment(alternating_power(model, 2 * k + 1), grid=512).attained
            double = decide_attainment(alternating_power(model, 4 * k + 2), grid=512).attained
            assert odd == double

    def test_norming_vector_of_t(self):
        model, _ = example3_model("one_over_n", 8)
        vector = norming_vector(skew_element(model))
        assert vector.x == pytest.approx(0.5)
        assert np.allclose(vector.vector, np.array([1.0, -1.0]) / math.sqrt(2))


def _random_skew(rng: np.random.Generator) -> np.ndarray:
    """S diag(1, .., 1, 0, .., 0) S^-1 with a well-conditioned complex S."""
    n = int(rng.integers(2, 17))
    k = int(rng.integers(1, n))
    while True:
        s = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if np.linalg.cond(s) < 1e3:
            break
    d = np.diag([1.0] * k + [0.0] * (n - k))
    return s @ d @ np.linalg.inv(s)


class TestRandomSkew:
    def test_every_skew_projection_attains_its_norm(self):
        for seed in range(200):
            t = _random_skew(np.random.default_rng(seed))
            t_norm = largest_singular_value(t)
            analysis = analyze_skew(t)
            verdict = attains_norm(analysis)
            assert verdict.attained, seed
            assert analysis.pq_norm < 1.0, seed
            assert analysis.afriat_residual <= 1e-9 * t_norm, seed
            assert math.sqrt(verdict.lambda_max) == pytest.approx(t_norm, rel=1e-9), seed


class TestLinearFamilyMonotone:
    def test_psi_grows_as_x_decreases(self):
        xs = np.linspace(0.99, 0.01, 99)
        model = SpectralModel.from_atoms(xs)
        for alpha in GRID:
            for beta in GRID:
                _, _, psi = sample_symbol(linear_family(model, alpha, beta), xs)
                assert np.all(np.diff(psi) >= -1e-9 * (1 + np.abs(psi[1:]))), (alpha, beta)
