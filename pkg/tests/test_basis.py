import math
import time

import numpy as np
import pytest

from topoforge import basis as B
from topoforge import polynomial as P
from topoforge.errors import DegenerateGridError, InputError

LEG, CHEB, HERM = P.legendre(), P.chebyshev(), P.hermite()


class TestGridCoordinates:
    def test_symmetric_endpoints(self):
        assert B.grid_coordinates(B.DomainMapping.SYMMETRIC_UNIT, 3).tolist() == [-1.0, 0.0, 1.0]
        assert B.grid_coordinates(B.DomainMapping.SYMMETRIC_UNIT, 2).tolist() == [-1.0, 1.0]

    def test_unit_interval_literal(self):
        assert B.grid_coordinates(B.DomainMapping.UNIT_INTERVAL, 4).tolist() == [0.0, 0.25, 0.5, 0.75]

    def test_errors(self):
        with pytest.raises(InputError):
            B.grid_coordinates(B.DomainMapping.UNIT_INTERVAL, 0)
        with pytest.raises(DegenerateGridError):
            B.grid_coordinates(B.DomainMapping.SYMMETRIC_UNIT, 1)


class TestBasisSpec:
    def test_cardinality(self):
        assert B.BasisSpec(LEG, 10, 3).n_terms == 11**3
        assert B.BasisSpec(LEG, 2, 2).n_terms == 9

    def test_validation(self):
        with pytest.raises(InputError):
            B.BasisSpec(LEG, -1, 3)
        with pytest.raises(InputError):
            B.BasisSpec(LEG, 2, 4)

    def test_round_trip_dict(self):
        spec = B.BasisSpec(P.hermite(P.HermiteVariant.THIRD), 7, 2, B.DomainMapping.UNIT_INTERVAL)
        assert B.BasisSpec.from_dict(spec.to_dict()) == spec

    def test_hermite_axis_scale(self):
        assert B.axis_scale(B.BasisSpec(HERM, 10, 3)) == pytest.approx(math.sqrt(21.0))
        assert B.axis_scale(B.BasisSpec(HERM, 10, 3, B.DomainMapping.UNIT_INTERVAL)) == 1.0
        assert B.axis_scale(B.BasisSpec(CHEB, 10, 3)) == 1.0


def _coeffs(spec, seed=0):
    rng = np.random.default_rng(seed)
    return B.CoefficientTensor(rng.normal(size=spec.coeff_shape), seed, spec)


class TestExpansionExamples:
    def test_constant_basis(self):
        spec = B.BasisSpec(LEG, 0, 3)
        coeffs = B.CoefficientTensor(np.full((1, 1, 1), 2.5), 0, spec)
        out = B.eval_expansion_grid(spec, coeffs, (4, 4, 4))
        assert out.shape == (4, 4, 4)
        assert np.all(out == 2.5)
        np.testing.assert_array_equal(out, B.eval_expansion_naive(spec, coeffs, (4, 4, 4)))

    def test_single_linear_term_replicates_x(self):
        spec = B.BasisSpec(CHEB, 1, 3)
        values = np.zeros((2, 2, 2))
        values[1, 0, 0] = 1.0  # a_100: T_1(x) T_0(y) T_0(z) = x
        coeffs = B.CoefficientTensor(values, 0, spec)
        out = B.eval_expansion_grid(spec, coeffs, (3, 3, 3))
        for m, expected in enumerate((-1.0, 0.0, 1.0)):
            assert np.all(out[:, :, m] == expected)

    def test_order10_matches_naive(self):
        spec = B.BasisSpec(LEG, 10, 3)
        coeffs = _coeffs(spec, seed=42)
        grid = B.eval_expansion_grid(spec, coeffs, (8, 8, 8))
        naive = B.eval_expansion_naive(spec, coeffs, (8, 8, 8))
        assert np.max(np.abs(grid - naive)) < 1e-11

    def test_2d_matches_naive(self):
        spec = B.BasisSpec(CHEB, 2, 2)
        coeffs = _coeffs(spec, seed=7)
        grid = B.eval_expansion_grid(spec, coeffs, (6, 6))
        assert grid.shape == (6, 6)
        assert np.max(np.abs(grid - B.eval_expansion_naive(spec, coeffs, (6, 6)))) < 1e-12


class TestSeparableNaiveEquivalence:
    def test_50_random_configurations(self):
        rng = np.random.default_rng(2024)
        families = [LEG, CHEB, HERM]
        worst = 0.0
        for trial in range(50):
            family = families[int(rng.integers(3))]
            dimensionality = 2 if trial % 5 == 0 else 3
            order = int(rng.integers(0, 7))
            dims = tuple(int(rng.integers(2, 13)) for _ in range(dimensionality))
            spec = B.BasisSpec(family, order, dimensionality)
            coeffs = _coeffs(spec, seed=trial)
            grid = B.eval_expansion_grid(spec, coeffs, dims)
            naive = B.eval_expansion_naive(spec, coeffs, dims)
            worst = max(worst, float(np.max(np.abs(grid - naive))))
        assert worst < 1e-10


class TestLinearityAndDeterminism:
    def test_scaling(self):
        spec = B.BasisSpec(CHEB, 4, 3)
        coeffs = _coeffs(spec, seed=3)
        scaled = B.CoefficientTensor(2.5 * coeffs.values, 3, spec)
        a = B.eval_expansion_grid(spec, scaled, (6, 6, 6))
        b = 2.5 * B.eval_expansion_grid(spec, coeffs, (6, 6, 6))
        assert np.max(np.abs(a - b)) < 1e-12

    def test_additivity(self):
        spec = B.BasisSpec(LEG, 4, 3)
        c1, c2 = _coeffs(spec, seed=5), _coeffs(spec, seed=6)
        combined = B.CoefficientTensor(c1.values + c2.values, 0, spec)
        a = B.eval_expansion_grid(spec, combined, (6, 6, 6))
        b = B.eval_expansion_grid(spec, c1, (6, 6, 6)) + B.eval_expansion_grid(spec, c2, (6, 6, 6))
        assert np.max(np.abs(a - b)) < 1e-10

    def test_repeat_is_bitwise_identical(self):
        spec = B.BasisSpec(HERM, 6, 3)
        coeffs = _coeffs(spec, seed=11)
        first = B.eval_expansion_grid(spec, coeffs, (10, 9, 8))
        second = B.eval_expansion_grid(spec, coeffs, (10, 9, 8))
        assert np.array_equal(first, second)


class TestValidation:
    def test_shape_mismatch(self):
        spec = B.BasisSpec(LEG, 3, 3)
        with pytest.raises(InputError):
            B.CoefficientTensor(np.zeros((3, 3, 3)), 0, spec)

    def test_spec_mismatch(self):
        spec_a = B.BasisSpec(LEG, 3, 3)
        spec_b = B.BasisSpec(CHEB, 3, 3)
        coeffs = _coeffs(spec_a)
        with pytest.raises(InputError):
            B.eval_expansion_grid(spec_b, coeffs, (4, 4, 4))

    def test_degenerate_axis(self):
        spec = B.BasisSpec(LEG, 2, 3)
        with pytest.raises(DegenerateGridError):
            B.eval_expansion_grid(spec, _coeffs(spec), (4, 1, 4))

    def test_wrong_dims_rank(self):
        spec = B.BasisSpec(LEG, 2, 3)
        with pytest.raises(InputError):
            B.eval_expansion_grid(spec, _coeffs(spec), (4, 4))


def test_performance_contract_64_cubed():
    spec = B.BasisSpec(CHEB, 10, 3)
    coeffs = _coeffs(spec, seed=1)
    start = time.perf_counter()
    out = B.eval_expansion_grid(spec, coeffs, (64, 64, 64))
    elapsed = time.perf_counter() - start
    assert out.shape == (64, 64, 64)
    assert elapsed < 1.0
