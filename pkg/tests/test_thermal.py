import math

import numpy as np
import pytest

from thermalverify import (BoundReport, ThermalParams, beta_from_temperature,
                           deviation_leading_order, error_bounds, fidelity,
                           flip_probability, half_weight_expectation,
                           invert_temperature, sample_size, setting_expectation,
                           union_bound)
from util_dense import exhaustive_parity_expectation

BETA_HALF = math.log(2) / 2  # exp(-2*beta) = 1/2


class TestFlipProbability:
    def test_limits(self):
        assert flip_probability(math.inf) == 0.0
        assert flip_probability(0.0) == 0.5
        assert flip_probability(BETA_HALF) == pytest.approx(1 / 3, abs=1e-15)

    def test_monotone_decreasing(self):
        grid = np.linspace(0.0, 6.0, 200)
        values = [flip_probability(b) for b in grid]
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert all(0.0 <= v <= 0.5 for v in values)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            flip_probability(-0.1)


class TestFidelity:
    def test_values(self):
        assert fidelity(7, math.inf) == 1.0
        assert fidelity(4, BETA_HALF) == pytest.approx(16 / 81, abs=1e-15)
        assert fidelity(1, 0.0) == pytest.approx(0.5, abs=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            fidelity(0, 1.0)


class TestSettingExpectation:
    def test_weight_zero_is_one(self):
        for n in (1, 4, 17):
            for beta in (0.0, 0.3, 2.0, math.inf):
                assert setting_expectation(n, 0, beta) == 1.0

    def test_known_value(self):
        assert setting_expectation(4, 2, BETA_HALF) == pytest.approx(1 / 9, abs=1e-14)

    def test_matches_exhaustive_parity_model(self):
        for n in range(1, 9):
            for beta in (0.2, 0.7, 1.5):
                p = flip_probability(beta)
                for wt in range(n + 1):
                    support = (1 << wt) - 1
                    brute = exhaustive_parity_expectation(n, support, p)
                    assert setting_expectation(n, wt, beta) == pytest.approx(brute, abs=1e-12)

    def test_matches_independent_bit_product(self):
        # each X/Y site contributes an independent factor 1 - 2p
        for n in (129, 600, 1024):
            for beta in (0.1, 1.0):
                p = flip_probability(beta)
                for wt in (0, 1, n // 2, n):
                    expected = (1.0 - 2.0 * p) ** wt
                    assert setting_expectation(n, wt, beta) == pytest.approx(expected, abs=1e-11)

    def test_size_cap(self):
        with pytest.raises(ValueError):
            setting_expectation(1025, 1, 1.0)


class TestHalfWeightExpectation:
    def test_limits(self):
        assert half_weight_expectation(10, math.inf) == 1.0
        assert half_weight_expectation(4, BETA_HALF) == pytest.approx(1 / 9, abs=1e-15)
        assert half_weight_expectation(8, 0.0) == 0.0

    def test_specializes_general_formula(self):
        for n in range(2, 42, 2):
            for beta in np.linspace(0.05, 5.0, 23):
                assert abs(half_weight_expectation(n, beta)
                           - setting_expectation(n, n // 2, beta)) <= 1e-12

    def test_monotone_in_temperature(self):
        assert half_weight_expectation(50, 1.0) > half_weight_expectation(50, 0.5)

    def test_odd_n_rejected(self):
        with pytest.raises(ValueError):
            half_weight_expectation(5, 1.0)


class TestBounds:
    def test_zero_temperature_bound_is_epsilon(self):
        report = error_bounds(6, math.inf, 0.25)
        assert report.fine_bound == 0.25
        assert report.coarse_bound == pytest.approx(2 / 6 + 0.25)

    def test_known_value(self):
        report = error_bounds(4, BETA_HALF, 0.0)
        assert report.fine_bound == pytest.approx(8 / 81, abs=1e-15)
        gap = fidelity(4, BETA_HALF) - half_weight_expectation(4, BETA_HALF)
        assert gap == pytest.approx(7 / 81, abs=1e-15)
        assert gap <= report.fine_bound

    def test_fine_below_coarse_on_grid(self):
        for n in range(4, 41, 2):
            for beta in np.linspace(0.05, 5.0, 21):
                report = error_bounds(n, beta, 0.1)
                assert report.fine_bound <= report.coarse_bound + 1e-15

    def test_leading_coefficient(self):
        assert error_bounds(10, 1.0, 0.0).leading_coefficient == 0
        assert error_bounds(10, 1.0, 0.0, wt=2).leading_coefficient == 6

    def test_validation(self):
        with pytest.raises(ValueError):
            error_bounds(5, 1.0, 0.1)
        with pytest.raises(ValueError):
            error_bounds(2, 1.0, 0.1)
        with pytest.raises(ValueError):
            error_bounds(4, 1.0, 1.0)

    def test_report_type(self):
        assert isinstance(error_bounds(4, 1.0, 0.1), BoundReport)


class TestDeviationLeadingOrder:
    def test_balanced_weight_vanishes(self):
        assert deviation_leading_order(12, 6, 0.9) == 0.0

    def test_symmetry(self):
        assert deviation_leading_order(12, 0, 1.3) == deviation_leading_order(12, 12, 1.3)

    def test_predicts_deviation_to_second_order(self):
        t = 1e-3
        beta = -math.log(t) / 2
        for wt in (0, 3, 12):
            actual = abs(setting_expectation(12, wt, beta) - fidelity(12, beta))
            predicted = deviation_leading_order(12, wt, beta)
            assert abs(actual - predicted) <= 144 * t * t

    def test_residual_ratio_stays_bounded_on_decreasing_grid(self):
        # | |E - F| - leading | / x^2 remains below n^2 as x -> 0
        n = 10
        for t in (1e-2, 1e-3, 1e-4, 1e-5):
            beta = -math.log(t) / 2
            truth = fidelity(n, beta)
            for wt in (0, 2, 5, 9):
                residual = abs(abs(setting_expectation(n, wt, beta) - truth)
                               - deviation_leading_order(n, wt, beta))
                assert residual / (t * t) <= n * n


class TestUnionBound:
    def test_values(self):
        assert union_bound(50, math.inf) == 1.0
        beta = -math.log(0.01 / 0.99) / 2  # p = 0.01
        assert union_bound(50, beta) == pytest.approx(0.5, abs=1e-12)
        assert union_bound(100, beta) == pytest.approx(0.0, abs=1e-12)
        assert fidelity(100, beta) - half_weight_expectation(100, beta) <= 0.02

    def test_below_fidelity_everywhere(self):
        for n in (1, 10, 100):
            for beta in np.linspace(0.0, 5.0, 40):
                assert union_bound(n, beta) <= fidelity(n, beta) + 1e-12


class TestSampleSize:
    def test_values(self):
        assert sample_size(0.02, 0.05) == 18445
        assert sample_size(1.0, 2 / math.e**2) == 4
        full_scale = sample_size(1e-6, 1e-2)
        assert full_scale == math.ceil(2e12 * math.log(200.0))
        assert full_scale <= 1.06e13

    def test_validation(self):
        for eps, delta in ((0.0, 0.1), (1.5, 0.1), (0.1, 0.0), (0.1, 1.0)):
            with pytest.raises(ValueError):
                sample_size(eps, delta)


class TestInvertTemperature:
    def test_perfect_observation_is_zero_temperature(self):
        assert invert_temperature(10, 1.0) == math.inf
        assert invert_temperature(10, 1.0, from_fidelity=True) == math.inf

    def test_known_value(self):
        assert invert_temperature(4, 1 / 9) == pytest.approx(BETA_HALF, abs=1e-9)

    def test_round_trip(self):
        for n in (10, 50):
            for beta in (0.1, 0.5, 1.0, 2.0, 3.0):
                recovered = invert_temperature(n, half_weight_expectation(n, beta))
                assert abs(recovered - beta) <= 1e-6

    def test_fidelity_round_trip(self):
        for n in (5, 12):
            for beta in (0.2, 1.0, 2.5):
                recovered = invert_temperature(n, fidelity(n, beta), from_fidelity=True)
                assert abs(recovered - beta) <= 1e-9

    def test_validation(self):
        with pytest.raises(ValueError):
            invert_temperature(10, 0.0)
        with pytest.raises(ValueError):
            invert_temperature(10, 1.2)
        with pytest.raises(ValueError):
            invert_temperature(5, 0.5)  # odd n in expectation mode
        with pytest.raises(ValueError):
            invert_temperature(4, fidelity(4, 0.0) / 2, from_fidelity=True)


class TestThermalParams:
    def test_derived_fields(self):
        params = ThermalParams(BETA_HALF)
        assert params.p_flip == pytest.approx(1 / 3, abs=1e-15)
        assert params.temperature == pytest.approx(1 / BETA_HALF)

    def test_from_temperature(self):
        assert ThermalParams.from_temperature(0.0).beta == math.inf
        assert ThermalParams.from_temperature(2.0).beta == 0.5
        with pytest.raises(ValueError):
            ThermalParams.from_temperature(-1.0)

    def test_serialization_uses_infinity_token(self):
        assert ThermalParams(math.inf).to_dict() == {"beta": "infinity", "p_flip": 0.0}

    def test_beta_from_temperature_matches(self):
        assert beta_from_temperature(0.0) == math.inf
        assert beta_from_temperature(4.0) == 0.25
