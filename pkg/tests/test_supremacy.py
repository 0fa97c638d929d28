import math
from collections import Counter

import numpy as np
import pytest

from thermalverify import (CertificationDecision, FamilyInstance, HypergraphSpec,
                           ProtocolConfig, build_family, build_pure_state, certify,
                           exact_outcome_distribution, family_triples, fidelity,
                           hadamard_transform, iqp_sample, optimal_setting,
                           run_protocol, stabilizer_check)
from util_dense import total_variation

FIG3_TRIANGLES = {
    (1, 2, 3), (5, 6, 7),
    (1, 3, 4), (5, 7, 8),
    (3, 4, 5), (7, 8, 9),
    (3, 5, 6), (7, 9, 10),
}


def reference_triples(n: int) -> set:
    """Direct reenumeration of the four progressions with clipping."""
    out = set()
    j = 1
    while 4 * j - 1 <= n:
        out.add((4 * j - 3, 4 * j - 2, 4 * j - 1))
        j += 1
    j = 1
    while 4 * j <= n:
        out.add((4 * j - 3, 4 * j - 1, 4 * j))
        j += 1
    j = 1
    while 4 * j + 1 <= n:
        out.add((4 * j - 1, 4 * j, 4 * j + 1))
        j += 1
    j = 1
    while 4 * j + 2 <= n:
        out.add((4 * j - 1, 4 * j + 1, 4 * j + 2))
        j += 1
    return out


class TestBuildFamily:
    def test_ten_vertex_instance_matches_known_triangles(self):
        inst = build_family(10)
        assert set(inst.spec.e3) == FIG3_TRIANGLES
        assert inst.spec.e2 == frozenset()

    def test_four_vertex_instance_is_fully_clipped(self):
        inst = build_family(4)
        assert set(inst.spec.e3) == {(1, 2, 3), (1, 3, 4)}

    def test_matches_reference_enumeration(self):
        for n in range(4, 42, 2):
            assert set(family_triples(n)) == reference_triples(n)

    def test_twenty_vertex_members(self):
        triples = set(family_triples(20))
        for expected in ((17, 18, 19), (17, 19, 20), (3, 4, 5), (7, 8, 9)):
            assert expected in triples
        assert len(triples) == len(reference_triples(20))

    def test_e2_is_passed_through(self):
        inst = build_family(10, e2={(1, 2), (9, 10)})
        assert inst.spec.e2 == frozenset({(1, 2), (9, 10)})

    def test_odd_n_rejected(self):
        with pytest.raises(ValueError):
            build_family(9)


class TestOptimalSetting:
    def test_ten_vertex_setting(self):
        word = optimal_setting(build_family(10))
        assert str(word) == "+IXIXIXIXIX"

    def test_setting_stabilizes_statevector_n10(self):
        inst = build_family(10)
        assert stabilizer_check(build_pure_state(inst.spec), optimal_setting(inst))

    def test_setting_stabilizes_statevector_n20(self):
        inst = build_family(20)
        word = optimal_setting(inst)
        assert word.x_mask == sum(1 << (i - 1) for i in range(2, 21, 2))
        assert word.z_mask == 0 and word.sign == 1
        assert stabilizer_check(build_pure_state(inst.spec), word)

    def test_e2_dresses_with_z(self):
        word = optimal_setting(build_family(10, e2={(1, 2)}))
        assert str(word) == "+ZXIXIXIXIX"
        assert word.xy_support == 5

    def test_half_support_for_random_e2(self):
        rng = np.random.default_rng(19)
        for n in range(4, 42, 2):
            pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
            for _ in range(3):
                take = rng.random(len(pairs)) < 0.15
                e2 = frozenset(p for p, t in zip(pairs, take) if t)
                word = optimal_setting(build_family(n, e2=e2))
                assert word.xy_support == n // 2

    def test_outside_family_is_detected(self):
        bad = FamilyInstance(HypergraphSpec(6, e3={(2, 4, 6)}))
        with pytest.raises(RuntimeError, match="restricted family"):
            optimal_setting(bad)


class TestCertify:
    def test_accepts_at_perfect_estimate_full_scale(self):
        decision = certify(1.0, 400_000)
        assert decision.threshold_met and decision.verdict == "accept"
        assert decision.tvd_bound == pytest.approx(2 * math.sqrt(6e-6), abs=1e-12)
        assert decision.tvd_bound < 1 / 192

    def test_rejects_slightly_low_estimate(self):
        decision = certify(0.99999, 400_000)
        assert not decision.threshold_met and decision.verdict == "reject"

    def test_monotone_in_estimate(self):
        accepted = certify(0.9999975, 400_000 * 2)
        assert certify(1.0, 400_000 * 2).threshold_met >= accepted.threshold_met
        f_grid = np.linspace(0.9999, 1.0, 50)
        flags = [certify(float(f), 10**6).threshold_met for f in f_grid]
        assert flags == sorted(flags)

    def test_small_n_requires_flag(self):
        with pytest.raises(ValueError, match="allow_small_n"):
            certify(1.0, 20)
        decision = certify(1.0, 20, allow_small_n=True)
        assert decision.verdict == "reject"  # 2/n = 0.1 makes the margin unreachable

    def test_estimate_range_validated(self):
        with pytest.raises(ValueError):
            certify(1.5, 400_000)

    def test_decision_serializes(self):
        doc = certify(1.0, 400_000).to_dict()
        assert doc["verdict"] == "accept" and doc["n"] == 400_000
        assert isinstance(certify(1.0, 400_000), CertificationDecision)


class TestExactDistribution:
    def test_zero_temperature_matches_direct_transform(self):
        inst = build_family(4)
        psi = build_pure_state(inst.spec).amplitudes
        direct = np.abs(hadamard_transform(psi)) ** 2
        assert np.allclose(exact_outcome_distribution(inst, math.inf), direct, atol=1e-12)

    def test_normalized_and_thermal_mixing(self):
        inst = build_family(6)
        for beta in (0.3, 1.0):
            dist = exact_outcome_distribution(inst, beta)
            assert dist.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.all(dist >= 0)


class TestIqpSample:
    def test_reproducible(self):
        inst = build_family(4)
        a = iqp_sample(inst, 1.0, shots=5000, seed=42)
        b = iqp_sample(inst, 1.0, shots=5000, seed=42)
        assert a == b
        assert sum(a.values()) == 5000

    def test_zero_temperature_close_to_exact(self):
        inst = build_family(4)
        shots = 10**6
        counts = iqp_sample(inst, math.inf, shots=shots, seed=7)
        exact = exact_outcome_distribution(inst, math.inf)
        empirical = np.zeros(16)
        for string, c in counts.items():
            empirical[int(string[::-1], 2)] = c / shots
        assert total_variation(empirical, exact) <= 0.01
        assert total_variation(empirical, exact) <= 3 / math.sqrt(shots)

    def test_statistical_accuracy_medium_sizes(self):
        # 3/sqrt(shots) is comfortable for n = 4 and 6; the n = 8 instance is
        # uniform over 64 strings, which already forces an expected deviation
        # of about 3.2/sqrt(shots), so it gets a mean-plus-margin budget.
        for n, shots, budget_over_sqrt in ((6, 250_000, 3.0), (8, 250_000, 4.5)):
            inst = build_family(n)
            counts = iqp_sample(inst, math.inf, shots=shots, seed=3)
            exact = exact_outcome_distribution(inst, math.inf)
            empirical = np.zeros(1 << n)
            for string, c in counts.items():
                empirical[int(string[::-1], 2)] = c / shots
            assert total_variation(empirical, exact) <= budget_over_sqrt / math.sqrt(shots)

    def test_thermal_samples_stay_near_ideal_distribution(self):
        # l1(thermal, ideal) <= 2*sqrt(1 - F); the sampled version adds
        # statistical noise on top
        inst = build_family(4)
        beta = 5.0
        shots = 200_000
        counts = iqp_sample(inst, beta, shots=shots, seed=9)
        ideal = exact_outcome_distribution(inst, math.inf)
        empirical = np.zeros(16)
        for string, c in counts.items():
            empirical[int(string[::-1], 2)] = c / shots
        l1 = np.abs(empirical - ideal).sum()
        bound = 2 * math.sqrt(1 - fidelity(4, beta)) + 10 / math.sqrt(shots)
        assert l1 <= bound

    def test_validation(self):
        inst = build_family(4)
        with pytest.raises(ValueError):
            iqp_sample(inst, 1.0, shots=0, seed=0)
        with pytest.raises(ValueError):
            iqp_sample(build_family(22), 1.0, shots=10, seed=0)


def test_reduced_setting_expectation_matches_half_weight_closed_form():
    """On the restricted family the single setting behaves exactly like a
    half-weight graph setting: its dense thermal expectation equals the
    closed form, e2 dressing included."""
    from thermalverify import dense_expectation, half_weight_expectation, thermal_density

    for n, e2 in ((4, frozenset()), (6, frozenset({(1, 2)})),
                  (8, frozenset({(2, 5), (1, 8)}))):
        inst = build_family(n, e2=e2)
        word = optimal_setting(inst)
        for beta in (0.3, 0.8, 2.0):
            rho = thermal_density(inst.spec, beta)
            assert dense_expectation(rho, word) == pytest.approx(
                half_weight_expectation(n, beta), abs=1e-10)


def test_end_to_end_small_scale_pipeline():
    """Family construction -> setting reduction -> protocol -> decision."""
    inst = build_family(12)
    setting = optimal_setting(inst)
    config = ProtocolConfig(epsilon=0.01, delta=0.05, n_samples=50_000, seed=31)
    report = run_protocol(inst.spec, setting, math.inf, config)
    assert report.f_est == 1.0
    decision = certify(report.f_est, 12, allow_small_n=True)
    assert decision.verdict == "reject"  # correct: 2/n dominates at small n
    assert decision.tvd_bound == pytest.approx(
        2 * math.sqrt(1 + 1e-6 - (1.0 - 2 / 12)), abs=1e-12)
