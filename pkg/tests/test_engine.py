import numpy as np
import pytest

from d2drent import admission, config, engine
from d2drent.admission import Assignment
from d2drent.config import Mode
from d2drent.policy import PolicyKind

ALL_POLICIES = list(PolicyKind)


def small_cfg(**extra):
    base = {"num_slots": 20, "num_reps": 3}
    base.update(extra)
    return config.config_from_mapping(base)


class TestSpawnArrivals:
    def test_zero_rate(self):
        rng = np.random.default_rng(0)
        assert all(engine.spawn_arrivals(rng, 0.0) == 0 for _ in range(100))

    def test_poisson_mean(self):
        rng = np.random.default_rng(1)
        draws = [engine.spawn_arrivals(rng, 0.5) for _ in range(100_000)]
        assert abs(np.mean(draws) - 0.5) < 0.01

    def test_deterministic(self):
        a = [engine.spawn_arrivals(np.random.default_rng(9), 0.5)
             for _ in range(10)]
        b = [engine.spawn_arrivals(np.random.default_rng(9), 0.5)
             for _ in range(10)]
        assert a == b

    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError):
            engine.spawn_arrivals(np.random.default_rng(0), -0.1)


class TestSlotAccounting:
    def test_single_oma_tenant(self, default_cfg):
        # one admitted D-UE at the OMA rate against one active D-UE
        asg = Assignment(host=np.array([0]), modes=(Mode.OMA,))
        rate = admission.assignment_revenue(asg, default_cfg)
        revenue, r_max, eta = engine.slot_accounting(rate, 1, default_cfg)
        assert revenue == pytest.approx(1.0)
        assert r_max == pytest.approx(1.5)
        assert eta == pytest.approx(2.0 / 3.0)

    def test_nothing_to_rent(self, default_cfg):
        revenue, r_max, eta = engine.slot_accounting(0.0, 0, default_cfg)
        assert (revenue, r_max, eta) == (0.0, 0.0, 0.0)


class TestRunEpisode:
    def test_zero_slots(self):
        cfg = small_cfg(num_slots=0)
        result = engine.run_episode(cfg, PolicyKind.PROPOSED, 1)
        assert result.per_slot == ()
        assert len(result.cumulative_eta) == 0

    def test_bit_identical_reruns(self):
        cfg = small_cfg()
        a = engine.run_episode(cfg, PolicyKind.RANDOM, 42)
        b = engine.run_episode(cfg, PolicyKind.RANDOM, 42)
        assert a.per_slot == b.per_slot
        assert np.array_equal(a.cumulative_eta, b.cumulative_eta)

    def test_zero_arrivals_zero_revenue(self):
        cfg = small_cfg(due_arrival_rate=0.0)
        result = engine.run_episode(cfg, PolicyKind.ALL_NOMA, 5)
        assert all(s.revenue == 0.0 and s.eta == 0.0 for s in result.per_slot)

    def test_all_oma_admits_at_most_one_per_cue(self):
        cfg = small_cfg(due_arrival_rate=3.0)
        result = engine.run_episode(cfg, PolicyKind.ALL_OMA, 7)
        for s in result.per_slot:
            assert s.admitted_count <= cfg.experiment.num_cue_m

    def test_eta_bounds_and_revenue_cap(self):
        for kind in ALL_POLICIES:
            result = engine.run_episode(small_cfg(due_arrival_rate=2.0), kind, 3)
            for s in result.per_slot:
                assert 0.0 <= s.eta <= 1.0
                assert s.revenue <= s.r_max
            assert np.all(result.cumulative_eta >= 0)
            assert np.all(result.cumulative_eta <= 1)
            assert np.all(np.diff(result.cumulative_revenue) >= 0)

    def test_common_random_numbers_share_environment(self):
        # arrivals and topology are policy-independent for a fixed seed
        per_policy = {
            kind: engine.run_episode(small_cfg(), kind, 11)
            for kind in ALL_POLICIES
        }
        actives = [[s.active_due for s in r.per_slot]
                   for r in per_policy.values()]
        assert all(a == actives[0] for a in actives)

    def test_proposed_matches_all_noma_before_switch(self):
        cfg = small_cfg()
        for seed in range(5):
            proposed = engine.run_episode(cfg, PolicyKind.PROPOSED, seed)
            noma = engine.run_episode(cfg, PolicyKind.ALL_NOMA, seed)
            assert proposed.per_slot[:7] == noma.per_slot[:7]

    def test_departures_clear_population(self):
        cfg = small_cfg(due_departure_prob=1.0, due_arrival_rate=1.0)
        result = engine.run_episode(cfg, PolicyKind.ALL_NOMA, 2)
        # with certain departure, only this slot's arrivals are ever active
        totals = [s.active_due for s in result.per_slot]
        assert max(totals) <= 6  # Poisson(1) tail, not cumulative growth
        assert sum(totals) < cfg.experiment.num_slots * 3


class TestRunMonteCarlo:
    def test_single_rep_zero_std(self):
        cfg = small_cfg(num_reps=1)
        summary = engine.run_monte_carlo(cfg, [PolicyKind.ALL_NOMA])
        assert np.all(summary.curves[PolicyKind.ALL_NOMA].std_cum_eta == 0.0)

    def test_duplicate_policy_identical(self):
        cfg = small_cfg(num_reps=2)
        summary = engine.run_monte_carlo(
            cfg, [PolicyKind.RANDOM, PolicyKind.RANDOM])
        assert summary.policies == (PolicyKind.RANDOM, PolicyKind.RANDOM)

    def test_shape(self):
        cfg = small_cfg(num_reps=2, num_slots=13)
        summary = engine.run_monte_carlo(cfg, ALL_POLICIES)
        assert summary.reps == 2
        for kind in ALL_POLICIES:
            assert summary.curves[kind].mean_cum_eta.shape == (13,)

    def test_parallelism_does_not_change_results(self):
        cfg = small_cfg(num_reps=6)
        serial = engine.run_monte_carlo(cfg, ALL_POLICIES, jobs=1)
        parallel = engine.run_monte_carlo(cfg, ALL_POLICIES, jobs=3)
        for kind in ALL_POLICIES:
            assert np.array_equal(serial.curves[kind].mean_cum_eta,
                                  parallel.curves[kind].mean_cum_eta)
            assert np.array_equal(serial.curves[kind].std_cum_eta,
                                  parallel.curves[kind].std_cum_eta)

    def test_means_in_unit_interval(self):
        cfg = small_cfg(num_reps=4)
        summary = engine.run_monte_carlo(cfg, ALL_POLICIES)
        for curve in summary.curves.values():
            assert np.all(curve.mean_cum_eta >= 0)
            assert np.all(curve.mean_cum_eta <= 1)
            assert np.all(curve.std_cum_eta >= 0)
