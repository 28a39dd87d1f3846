"""Scoring and constraint-audit tests against hand-computed references.

Reference values below were derived by hand from the propagation model
(carrier 2.4 GHz, exponent 2.5, d0 = 1 m, noise -96 dBm = 2.511886431509582e-10
mW) and frozen:

    gain(6 m)   = 1.1205237561811838e-06
    gain(10 m)  = 3.124634289638048e-07
    gain(14 m)  = 1.3473459001827602e-07

Single link, 10 m at 15 mW:
    SINR = 15 * gain(10) / N0 = 18659.089740933585
    throughput = 2e6 * log2(1 + SINR) = 28375336.608057935 b/s

Mirror pair (two APs 20 m apart, both STAs at the midpoint, 15 mW each,
one RU): each STA sees its own signal and the interferer through the same
10 m gain, so SINR = 15g / (15g + N0) = 0.9999464096896702.

Asymmetric pair (APs at x=0 and x=20, STA0 at x=6 owned by AP0 with 15 mW,
STA1 at x=14 owned by AP1 with 10 mW, shared RU):
    SINR0 = 15*gain(6) / (10*gain(14) + N0) = 12.472464123057387
    SINR1 = 10*gain(6) / (15*gain(14) + N0) = 5.543661829477277
    total = 2e6 * (log2(1+SINR0) + log2(1+SINR1)) = 12924080.065559082 b/s
"""

import dataclasses
import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mapcsim.core import (
    UNASSIGNED,
    Allocation,
    ConstraintId,
    GainMatrix,
    NetworkParams,
    Scenario,
    UndefinedGainError,
    check_feasibility,
    compute_sinr,
    evaluate,
    throughput_gain,
)
from mapcsim.propagation import build_gain_matrix

from conftest import make_scenario, random_feasible_allocation, single_link_scenario

GAIN_6M = 1.1205237561811838e-06
GAIN_10M = 3.124634289638048e-07
GAIN_14M = 1.3473459001827602e-07
NOISE_MW = 2.511886431509582e-10

SINGLE_SINR = 18659.089740933585
SINGLE_THROUGHPUT = 28375336.608057935
MIRROR_SINR = 0.9999464096896702
PAIR_SINR_0 = 12.472464123057387
PAIR_SINR_1 = 5.543661829477277
PAIR_TOTAL = 12924080.065559082


def mirror_pair_scenario():
    return make_scenario([[0.0, 0.0], [20.0, 0.0]],
                         [[10.0, 0.0], [10.0, 0.0]], [0, 1])


def asymmetric_pair_scenario():
    return make_scenario([[0.0, 0.0], [20.0, 0.0]],
                         [[6.0, 0.0], [14.0, 0.0]], [0, 1])


class TestNetworkParams:
    def test_defaults_match_model_constants(self):
        p = NetworkParams()
        assert p.noise_power_mw == pytest.approx(NOISE_MW, rel=1e-15)
        assert p.sinr_threshold_linear == pytest.approx(10.0 ** 0.2, rel=1e-15)
        assert p.num_rus == 10 and p.g_max == 4

    @pytest.mark.parametrize("kwargs", [
        {"frequency_hz": 0.0},
        {"pathloss_exponent": -1.0},
        {"noise_power_mw": 0.0},
        {"num_rus": 0},
        {"g_max": 0},
        {"p_max_sta_mw": 200.0},  # exceeds the AP budget
    ])
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            NetworkParams(**kwargs)


class TestScenario:
    def test_counts_and_membership(self):
        sc = asymmetric_pair_scenario()
        assert sc.num_aps == 2 and sc.num_stas == 2
        assert sc.stas_of_ap(0) == [0] and sc.stas_of_ap(1) == [1]

    def test_association_length_mismatch(self):
        with pytest.raises(ValueError):
            make_scenario([[0, 0]], [[1, 0], [2, 0]], [0])

    def test_association_out_of_range(self):
        with pytest.raises(ValueError):
            make_scenario([[0, 0]], [[1, 0]], [1])

    def test_every_ap_must_serve(self):
        with pytest.raises(ValueError):
            make_scenario([[0, 0], [5, 0]], [[1, 0], [2, 0]], [0, 0])

    def test_stas_of_ap_is_sorted(self):
        sc = make_scenario([[0, 0], [30, 0]],
                           [[1, 0], [29, 0], [2, 0], [28, 0]], [0, 1, 0, 1])
        assert sc.stas_of_ap(0) == [0, 2]
        assert sc.stas_of_ap(1) == [1, 3]


class TestGainMatrixValidation:
    def test_rejects_wrong_rank(self):
        with pytest.raises(ValueError):
            GainMatrix(np.ones(3))

    @pytest.mark.parametrize("value", [0.0, -1e-9, 1.0 + 1e-9])
    def test_rejects_out_of_range_entry(self, value):
        g = np.full((2, 2), 0.5)
        g[1, 0] = value
        with pytest.raises(ValueError):
            GainMatrix(g)


class TestAllocation:
    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            Allocation(ru_of_sta=[0, 1], power_of_sta_mw=[5.0])

    def test_grouping_fields_set_together(self):
        with pytest.raises(ValueError):
            Allocation(ru_of_sta=[0], power_of_sta_mw=[5.0], group_of_ap=[0])

    def test_canonical_grouping_relabels_by_first_member(self):
        a = Allocation(ru_of_sta=[0], power_of_sta_mw=[5.0],
                       group_of_ap=[2, 2, 0], active_groups=frozenset({0, 2}))
        members, active = a.canonical_grouping()
        assert members == (0, 0, 1)
        assert active == frozenset({0, 1})

    def test_empty_active_groups_keep_count_only(self):
        # one member group plus two empty active labels (7 and 9): the labels
        # are arbitrary so both relabel to the same canonical form
        a = Allocation(ru_of_sta=[0], power_of_sta_mw=[5.0],
                       group_of_ap=[3], active_groups=frozenset({3, 7, 9}))
        b = Allocation(ru_of_sta=[0], power_of_sta_mw=[5.0],
                       group_of_ap=[0], active_groups=frozenset({0, 1, 5}))
        assert a.canonical_grouping() == b.canonical_grouping()
        assert a == b

    def test_equality_ignores_group_labels(self):
        a = Allocation(ru_of_sta=[0, 1], power_of_sta_mw=[5.0, 10.0],
                       group_of_ap=[4, 1], active_groups=frozenset({4, 1}))
        b = Allocation(ru_of_sta=[0, 1], power_of_sta_mw=[5.0, 10.0],
                       group_of_ap=[0, 3], active_groups=frozenset({0, 3}))
        assert a == b

    def test_equality_sees_real_differences(self):
        a = Allocation(ru_of_sta=[0, 1], power_of_sta_mw=[5.0, 10.0])
        assert a != Allocation(ru_of_sta=[0, 2], power_of_sta_mw=[5.0, 10.0])
        assert a != Allocation(ru_of_sta=[0, 1], power_of_sta_mw=[5.0, 5.0])
        assert a == Allocation(ru_of_sta=[0, 1], power_of_sta_mw=[5.0, 10.0])
        grouped = Allocation(ru_of_sta=[0, 1], power_of_sta_mw=[5.0, 10.0],
                             group_of_ap=[0, 0], active_groups=frozenset({0}))
        assert a != grouped


class TestFrozenSinrValues:
    def test_single_link(self):
        sc = single_link_scenario(10.0)
        gm = build_gain_matrix(sc)
        assert gm.gains[0, 0] == pytest.approx(GAIN_10M, rel=1e-14)
        alloc = Allocation(ru_of_sta=[0], power_of_sta_mw=[15.0])
        assert compute_sinr(sc, gm, alloc, 0) == pytest.approx(SINGLE_SINR, rel=1e-12)
        res = evaluate(sc, gm, alloc)
        assert res.total_throughput_bps == pytest.approx(SINGLE_THROUGHPUT, rel=1e-12)

    def test_mirror_pair(self):
        sc = mirror_pair_scenario()
        gm = build_gain_matrix(sc)
        alloc = Allocation(ru_of_sta=[0, 0], power_of_sta_mw=[15.0, 15.0])
        for u in (0, 1):
            assert compute_sinr(sc, gm, alloc, u) == pytest.approx(MIRROR_SINR, rel=1e-12)

    def test_asymmetric_pair(self):
        sc = asymmetric_pair_scenario()
        gm = build_gain_matrix(sc)
        assert gm.gains[0, 0] == pytest.approx(GAIN_6M, rel=1e-14)
        assert gm.gains[0, 1] == pytest.approx(GAIN_14M, rel=1e-14)
        assert gm.gains[1, 1] == pytest.approx(GAIN_6M, rel=1e-14)
        assert gm.gains[1, 0] == pytest.approx(GAIN_14M, rel=1e-14)
        alloc = Allocation(ru_of_sta=[3, 3], power_of_sta_mw=[15.0, 10.0])
        res = evaluate(sc, gm, alloc)
        assert res.sinr_of_sta[0] == pytest.approx(PAIR_SINR_0, rel=1e-12)
        assert res.sinr_of_sta[1] == pytest.approx(PAIR_SINR_1, rel=1e-12)
        assert res.total_throughput_bps == pytest.approx(PAIR_TOTAL, rel=1e-12)
        assert res.power_used_by_ap_mw.tolist() == [15.0, 10.0]

    def test_orthogonal_rus_remove_interference(self):
        sc = asymmetric_pair_scenario()
        gm = build_gain_matrix(sc)
        alloc = Allocation(ru_of_sta=[3, 7], power_of_sta_mw=[15.0, 10.0])
        res = evaluate(sc, gm, alloc)
        assert res.sinr_of_sta[0] == pytest.approx(15.0 * GAIN_6M / NOISE_MW, rel=1e-12)
        assert res.sinr_of_sta[1] == pytest.approx(10.0 * GAIN_6M / NOISE_MW, rel=1e-12)


class TestEvaluateStructure:
    def test_unassigned_sta_scores_zero(self):
        sc = asymmetric_pair_scenario()
        gm = build_gain_matrix(sc)
        alloc = Allocation(ru_of_sta=[0, UNASSIGNED], power_of_sta_mw=[15.0, 0.0])
        res = evaluate(sc, gm, alloc)
        assert res.sinr_of_sta[1] == 0.0
        assert res.throughput_of_sta_bps[1] == 0.0
        assert compute_sinr(sc, gm, alloc, 1) == 0.0
        # STA0 now enjoys an interference-free RU
        assert res.sinr_of_sta[0] == pytest.approx(15.0 * GAIN_6M / NOISE_MW, rel=1e-12)

    def test_total_is_left_to_right_sum(self):
        sc = mirror_pair_scenario()
        gm = build_gain_matrix(sc)
        alloc = Allocation(ru_of_sta=[0, 0], power_of_sta_mw=[15.0, 10.0])
        res = evaluate(sc, gm, alloc)
        total = 0.0
        for t in res.throughput_of_sta_bps:
            total += float(t)
        assert res.total_throughput_bps == total

    def test_throughput_follows_shannon_form(self):
        sc = single_link_scenario(10.0)
        gm = build_gain_matrix(sc)
        alloc = Allocation(ru_of_sta=[0], power_of_sta_mw=[5.0])
        res = evaluate(sc, gm, alloc)
        s = float(res.sinr_of_sta[0])
        assert res.throughput_of_sta_bps[0] == 2e6 * math.log2(1.0 + s)

    def test_dimension_checks(self):
        sc = asymmetric_pair_scenario()
        gm = build_gain_matrix(sc)
        with pytest.raises(ValueError):
            evaluate(sc, gm, Allocation(ru_of_sta=[0], power_of_sta_mw=[5.0]))
        with pytest.raises(ValueError):
            evaluate(sc, gm, Allocation(ru_of_sta=[0, 99], power_of_sta_mw=[5.0, 5.0]))
        with pytest.raises(ValueError):
            evaluate(sc, GainMatrix(np.full((3, 2), 0.5)),
                     Allocation(ru_of_sta=[0, 1], power_of_sta_mw=[5.0, 5.0]))
        with pytest.raises(ValueError):
            check_feasibility(sc, Allocation(
                ru_of_sta=[0, 1], power_of_sta_mw=[5.0, 5.0],
                group_of_ap=[0], active_groups=frozenset({0})))


class TestCheckFeasibility:
    def scenario_eight_on_one_ap(self):
        pos = [[float(i), 1.0] for i in range(8)]
        return make_scenario([[0.0, 0.0], [40.0, 0.0]],
                             pos + [[40.0, 1.0]], [0] * 8 + [1])

    def test_clean_allocation_passes(self):
        sc = asymmetric_pair_scenario()
        alloc = Allocation(ru_of_sta=[0, 0], power_of_sta_mw=[15.0, 10.0],
                           group_of_ap=[0, 0], active_groups=frozenset({0}))
        rep = check_feasibility(sc, alloc)
        assert rep.feasible and rep.not_applicable == ()

    def test_sta_power_above_cap(self):
        sc = asymmetric_pair_scenario()
        rep = check_feasibility(sc, Allocation(ru_of_sta=[0, 1],
                                               power_of_sta_mw=[15.01, 5.0]))
        kinds = [v.constraint for v in rep.violations]
        assert kinds == [ConstraintId.STA_POWER]
        assert rep.violations[0].indices == (0,)

    def test_sta_power_negative(self):
        sc = asymmetric_pair_scenario()
        rep = check_feasibility(sc, Allocation(ru_of_sta=[0, 1],
                                               power_of_sta_mw=[-0.5, 5.0]))
        assert [v.constraint for v in rep.violations] == [ConstraintId.STA_POWER]

    def test_unassigned_sta_must_be_silent(self):
        sc = asymmetric_pair_scenario()
        rep = check_feasibility(sc, Allocation(ru_of_sta=[0, UNASSIGNED],
                                               power_of_sta_mw=[5.0, 1.0]))
        assert [v.constraint for v in rep.violations] == [ConstraintId.STA_POWER]
        assert rep.violations[0].indices == (1,)

    def test_intra_bss_reuse(self):
        sc = make_scenario([[0.0, 0.0]], [[1.0, 0.0], [2.0, 0.0]], [0, 0])
        rep = check_feasibility(sc, Allocation(ru_of_sta=[4, 4],
                                               power_of_sta_mw=[5.0, 5.0]))
        assert [v.constraint for v in rep.violations] == [ConstraintId.NO_INTRA_BSS_REUSE]
        assert rep.violations[0].indices == (0, 4)

    def test_ap_budget(self):
        sc = self.scenario_eight_on_one_ap()
        ru = list(range(8)) + [0]
        p = [15.0] * 8 + [5.0]  # AP0 spends 120 mW
        rep = check_feasibility(sc, Allocation(ru_of_sta=ru, power_of_sta_mw=p))
        assert [v.constraint for v in rep.violations] == [ConstraintId.AP_POWER]
        assert rep.violations[0].indices == (0,)

    def test_ungrouped_reports_not_applicable(self):
        sc = asymmetric_pair_scenario()
        rep = check_feasibility(sc, Allocation(ru_of_sta=[0, 0],
                                               power_of_sta_mw=[5.0, 5.0]))
        assert rep.feasible
        assert rep.not_applicable == (ConstraintId.ONE_GROUP, ConstraintId.GROUP_CAP,
                                      ConstraintId.GROUP_RU_REUSE)

    def test_member_of_inactive_group(self):
        sc = asymmetric_pair_scenario()
        alloc = Allocation(ru_of_sta=[0, 1], power_of_sta_mw=[5.0, 5.0],
                           group_of_ap=[0, 1], active_groups=frozenset({0}))
        rep = check_feasibility(sc, alloc)
        assert [v.constraint for v in rep.violations] == [ConstraintId.ONE_GROUP]
        assert rep.violations[0].indices == (1,)

    def test_group_size_cap(self):
        sc = asymmetric_pair_scenario()
        alloc = Allocation(ru_of_sta=[0, 1], power_of_sta_mw=[5.0, 5.0],
                           group_of_ap=[0, 0], active_groups=frozenset({0}))
        assert check_feasibility(sc, alloc).feasible
        rep = check_feasibility(sc, alloc, max_group_size=1)
        assert [v.constraint for v in rep.violations] == [ConstraintId.ONE_GROUP]

    def test_too_many_active_groups(self):
        pos = [[10.0 * i, 0.0] for i in range(5)]
        stas = [[10.0 * i, 1.0] for i in range(5)]
        sc = make_scenario(pos, stas, list(range(5)))
        alloc = Allocation(ru_of_sta=list(range(5)), power_of_sta_mw=[5.0] * 5,
                           group_of_ap=list(range(5)),
                           active_groups=frozenset(range(5)))
        rep = check_feasibility(sc, alloc)
        assert [v.constraint for v in rep.violations] == [ConstraintId.GROUP_CAP]
        assert rep.violations[0].indices == (0, 1, 2, 3, 4)

    def test_cross_group_ru_sharing(self):
        sc = asymmetric_pair_scenario()
        alloc = Allocation(ru_of_sta=[2, 2], power_of_sta_mw=[5.0, 5.0],
                           group_of_ap=[0, 1], active_groups=frozenset({0, 1}))
        rep = check_feasibility(sc, alloc)
        assert [v.constraint for v in rep.violations] == [ConstraintId.GROUP_RU_REUSE]
        assert rep.violations[0].indices == (2,)

    def test_multiple_violations_reported_together(self):
        sc = make_scenario([[0.0, 0.0]], [[1.0, 0.0], [2.0, 0.0]], [0, 0])
        rep = check_feasibility(sc, Allocation(ru_of_sta=[4, 4],
                                               power_of_sta_mw=[20.0, 5.0]))
        kinds = {v.constraint for v in rep.violations}
        assert kinds == {ConstraintId.STA_POWER, ConstraintId.NO_INTRA_BSS_REUSE}
        assert not rep.feasible


class TestThroughputGain:
    def test_percent_value(self):
        gain = throughput_gain(_result_with_total(1.716e8), _result_with_total(1.0e8))
        assert gain == pytest.approx(71.6, abs=1e-12)

    def test_negative_gain(self):
        gain = throughput_gain(_result_with_total(5.0e7), _result_with_total(1.0e8))
        assert gain == pytest.approx(-50.0, abs=1e-12)

    def test_zero_baseline_rejected(self):
        with pytest.raises(UndefinedGainError):
            throughput_gain(_result_with_total(1.0), _result_with_total(0.0))


def _result_with_total(total):
    from mapcsim.core import EvaluationResult
    return EvaluationResult(sinr_of_sta=np.zeros(1), throughput_of_sta_bps=np.zeros(1),
                            total_throughput_bps=float(total),
                            power_used_by_ap_mw=np.zeros(1))


class TestScoringProperties:
    @given(p0=st.integers(1, 15), p1=st.integers(1, 15))
    def test_scaling_powers_and_noise_leaves_sinr_unchanged(self, p0, p1):
        # doubling is exact in binary floating point, so scaling every power
        # and the noise floor by 2 must reproduce each SINR bit for bit
        sc = asymmetric_pair_scenario()
        gm = build_gain_matrix(sc)
        a1 = Allocation(ru_of_sta=[0, 0], power_of_sta_mw=[float(p0), float(p1)])
        r1 = evaluate(sc, gm, a1)
        params2 = dataclasses.replace(
            sc.params,
            noise_power_mw=2.0 * sc.params.noise_power_mw,
            p_max_sta_mw=2.0 * sc.params.p_max_sta_mw,
            p_max_ap_mw=2.0 * sc.params.p_max_ap_mw,
        )
        sc2 = Scenario(params=params2, ap_positions=sc.ap_positions,
                       sta_positions=sc.sta_positions, association=sc.association)
        a2 = Allocation(ru_of_sta=[0, 0],
                        power_of_sta_mw=[2.0 * p0, 2.0 * p1])
        r2 = evaluate(sc2, gm, a2)
        assert np.array_equal(r1.sinr_of_sta, r2.sinr_of_sta)

    @given(p_interferer=st.integers(2, 15))
    def test_lowering_interference_raises_sinr(self, p_interferer):
        sc = asymmetric_pair_scenario()
        gm = build_gain_matrix(sc)
        loud = Allocation(ru_of_sta=[0, 0],
                          power_of_sta_mw=[15.0, float(p_interferer)])
        quiet = Allocation(ru_of_sta=[0, 0],
                           power_of_sta_mw=[15.0, float(p_interferer - 1)])
        assert compute_sinr(sc, gm, quiet, 0) > compute_sinr(sc, gm, loud, 0)

    @given(seed=st.integers(0, 400))
    def test_evaluate_agrees_with_per_sta_sinr(self, seed):
        rng = np.random.default_rng(seed)
        pos = rng.uniform(0, 30, size=(3, 2))
        stas = rng.uniform(0, 30, size=(7, 2))
        assoc = np.concatenate([np.arange(3), rng.integers(0, 3, size=4)])
        sc = make_scenario(pos, stas, assoc)
        gm = build_gain_matrix(sc)
        alloc = random_feasible_allocation(sc, rng)
        res = evaluate(sc, gm, alloc)
        for u in range(sc.num_stas):
            assert res.sinr_of_sta[u] == compute_sinr(sc, gm, alloc, u)
        assert check_feasibility(sc, alloc).feasible

    @given(seed=st.integers(0, 200))
    def test_random_feasible_allocations_audit_clean(self, seed):
        rng = np.random.default_rng(seed)
        pos = rng.uniform(0, 40, size=(4, 2))
        stas = rng.uniform(0, 40, size=(9, 2))
        assoc = np.concatenate([np.arange(4), rng.integers(0, 4, size=5)])
        sc = make_scenario(pos, stas, assoc)
        rep = check_feasibility(sc, random_feasible_allocation(sc, rng))
        assert rep.feasible and rep.not_applicable == ()
