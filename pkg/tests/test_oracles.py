import math

import numpy as np
import pytest

from renyivar import (
    Alpha,
    Dist,
    EdgeFn,
    ExtReal,
    IIDVariationalProblem,
    InputValidationError,
    MarkovVariationalProblem,
    PairMeasure,
    easyvar_finite_n_oracle,
    easyvar_oracle_report,
    random_search_extremum,
    rel_entropy_rate,
    rel_entropy_rate_oracle,
    renyi_div,
    renyi_rate,
    renyi_rate_oracle,
    varadhan_growth,
)
from conftest import random_pair

FAIR_COIN = PairMeasure([[0.25, 0.25], [0.25, 0.25]])
TWO_CYCLE = PairMeasure([[0.0, 0.5], [0.5, 0.0]])


def coin_pair(p: float) -> PairMeasure:
    marginal = np.array([p, 1.0 - p])
    return PairMeasure(np.outer(marginal, marginal))


class TestRenyiRateOracle:
    def test_identical_chains_all_zero(self, rng):
        pm = random_pair(rng, 3)
        report = renyi_rate_oracle(Alpha(2.0), pm, pm, n_max=50)
        assert report.final_gap <= 1e-12
        assert all(abs(v) <= 1e-12 for _, v in report.sequence)

    def test_iid_coins_constant_in_both_modes(self):
        nu, th = coin_pair(0.5), coin_pair(0.3)
        rate = renyi_rate(Alpha(2.0), nu, th).raw
        for mode in ("difference", "cesaro"):
            report = renyi_rate_oracle(Alpha(2.0), nu, th, n_max=40, mode=mode)
            assert report.mode == mode
            assert all(abs(v - rate) <= 1e-12 for _, v in report.sequence)

    def test_above_one_without_domination_all_infinite(self):
        report = renyi_rate_oracle(Alpha(2.0), FAIR_COIN, TWO_CYCLE, n_max=10)
        assert report.limit_claim.is_pos_inf
        assert report.final_gap == 0.0
        assert all(v == math.inf for _, v in report.sequence)

    def test_difference_mode_converges_full_support(self, rng):
        for a in (-1.0, 0.5, 2.0):
            nu, th = random_pair(rng, 3), random_pair(rng, 3)
            report = renyi_rate_oracle(Alpha(a), nu, th, n_max=500)
            assert report.final_gap <= 1e-6

    def test_cesaro_mode_slower(self, rng):
        nu, th = random_pair(rng, 3), random_pair(rng, 3)
        diff = renyi_rate_oracle(Alpha(2.0), nu, th, n_max=200, mode="difference")
        ces = renyi_rate_oracle(Alpha(2.0), nu, th, n_max=200, mode="cesaro")
        assert diff.final_gap <= ces.final_gap

    def test_claim_override(self):
        nu, th = coin_pair(0.5), coin_pair(0.3)
        report = renyi_rate_oracle(Alpha(2.0), nu, th, n_max=20, claim=ExtReal(0.0))
        rate = renyi_rate(Alpha(2.0), nu, th).raw
        assert report.final_gap == pytest.approx(rate, abs=1e-10)

    def test_rejects_tiny_horizon(self):
        with pytest.raises(InputValidationError):
            renyi_rate_oracle(Alpha(2.0), FAIR_COIN, FAIR_COIN, n_max=2)


class TestRelEntropyRateOracle:
    def test_telescoping_every_difference_equals_rate(self, rng):
        nu, th = random_pair(rng, 4), random_pair(rng, 4)
        rate = rel_entropy_rate(nu, th).raw
        report = rel_entropy_rate_oracle(nu, th, n_max=100)
        assert len(report.sequence) == 98  # differences for n = 2..99
        for n, v in report.sequence:
            assert abs(v - rate) <= 1e-10, f"difference at n={n} drifted"

    def test_non_dominated_infinite(self):
        report = rel_entropy_rate_oracle(FAIR_COIN, TWO_CYCLE, n_max=10)
        assert report.limit_claim.is_pos_inf and report.final_gap == 0.0

    def test_cesaro_mode_has_initial_bias(self, rng):
        nu, th = random_pair(rng, 3), random_pair(rng, 3)
        report = rel_entropy_rate_oracle(nu, th, n_max=200, mode="cesaro")
        # O(1/n) from the initial-distribution term, not exact
        assert report.final_gap <= 10.0 / 200.0


class TestEasyvarFiniteN:
    def test_zero_function_is_zero(self, rng):
        pm = random_pair(rng, 3)
        for n in (1, 2, 7, 50):
            assert easyvar_finite_n_oracle(np.zeros((3, 3)), pm, n) == pytest.approx(
                0.0, abs=1e-12
            )

    def test_constant_function_exact(self, rng):
        pm = random_pair(rng, 3)
        c = 1.7
        for n in (1, 2, 5, 40):
            want = c * (n - 1) / n  # n - 1 edges on a length-n path
            got = easyvar_finite_n_oracle(np.full((3, 3), c), pm, n)
            assert got == pytest.approx(want, abs=1e-12)

    def test_matches_growth_at_large_horizon(self, rng):
        pm = random_pair(rng, 3)
        g = rng.uniform(-2.0, 2.0, size=(3, 3))
        limit = varadhan_growth(EdgeFn(g), pm).raw
        assert abs(easyvar_finite_n_oracle(g, pm, 500) - limit) <= 1e-2

    def test_report_difference_mode_tight(self, rng):
        pm = random_pair(rng, 3)
        g = rng.uniform(-2.0, 2.0, size=(3, 3))
        report = easyvar_oracle_report(g, pm, n_max=500)
        assert report.final_gap <= 1e-6
        assert report.limit_claim.raw == pytest.approx(varadhan_growth(EdgeFn(g), pm).raw)

    def test_shape_mismatch_rejected(self, rng):
        with pytest.raises(InputValidationError):
            easyvar_finite_n_oracle(np.zeros((2, 2)), random_pair(rng, 3), 5)

    def test_bad_horizon_rejected(self, rng):
        with pytest.raises(InputValidationError):
            easyvar_finite_n_oracle(np.zeros((3, 3)), random_pair(rng, 3), 0)


class TestConvergenceReportShape:
    def test_sequence_strictly_increasing_n(self, rng):
        nu, th = random_pair(rng, 3), random_pair(rng, 3)
        for mode in ("difference", "cesaro"):
            report = renyi_rate_oracle(Alpha(0.5), nu, th, n_max=30, mode=mode)
            ns = [n for n, _ in report.sequence]
            assert ns == sorted(set(ns))

    def test_final_gap_is_last_entry_distance(self, rng):
        nu, th = random_pair(rng, 3), random_pair(rng, 3)
        report = renyi_rate_oracle(Alpha(2.0), nu, th, n_max=30)
        last = report.sequence[-1][1]
        assert report.final_gap == pytest.approx(abs(last - report.limit_claim.raw), abs=0)


class TestRandomSearch:
    def test_iid_identical_target_zero(self):
        nu = Dist([0.4, 0.6])
        problem = IIDVariationalProblem(Alpha(2.0), nu, nu)
        report = random_search_extremum(problem, trials=300, hill_steps=40)
        assert report.target.raw == pytest.approx(0.0, abs=1e-12)
        assert report.passed and report.margin <= 1e-8

    def test_iid_coin_hill_climb_reaches_target(self):
        problem = IIDVariationalProblem(Alpha(2.0), Dist([0.5, 0.5]), Dist([0.3, 0.7]))
        report = random_search_extremum(problem, trials=500, hill_steps=100)
        assert report.passed
        assert report.refinement_gap <= 1e-3

    def test_iid_inf_regime_never_undercut(self, rng):
        nu = Dist(rng.uniform(0.1, 1.0, size=3))
        th = Dist(rng.uniform(0.1, 1.0, size=3))
        problem = IIDVariationalProblem(Alpha(0.5), nu, th)
        report = random_search_extremum(problem, trials=500, hill_steps=100)
        assert report.passed and report.margin <= 1e-8
        # inf regime: sampled values sit above the closed-form infimum
        assert report.best_refined >= report.target.raw - 1e-8

    def test_iid_negative_alpha(self, rng):
        nu = Dist(rng.uniform(0.1, 1.0, size=3))
        th = Dist(rng.uniform(0.1, 1.0, size=3))
        problem = IIDVariationalProblem(Alpha(-1.0), nu, th)
        report = random_search_extremum(problem, trials=400, hill_steps=80)
        assert report.passed
        assert report.refinement_gap <= 1e-3

    def test_markov_search_respects_closed_form(self, rng):
        nu, th = random_pair(rng, 3), random_pair(rng, 3)
        for a in (0.5, 2.0):
            problem = MarkovVariationalProblem(Alpha(a), nu, th)
            report = random_search_extremum(problem, trials=60, hill_steps=12)
            assert report.passed and report.margin <= 1e-8

    def test_markov_hill_climb_near_target(self):
        nu, th = coin_pair(0.5), coin_pair(0.3)
        problem = MarkovVariationalProblem(Alpha(2.0), nu, th)
        report = random_search_extremum(problem, trials=80, hill_steps=60)
        assert report.refinement_gap <= 1e-3

    def test_report_round_trips_inputs(self):
        nu = Dist([0.4, 0.6])
        problem = IIDVariationalProblem(Alpha(2.0), nu, nu)
        report = random_search_extremum(problem, trials=123, seed=7, hill_steps=5)
        assert report.trials == 123 and report.seed == 7

    def test_deterministic_given_seed(self):
        problem = IIDVariationalProblem(Alpha(2.0), Dist([0.5, 0.5]), Dist([0.3, 0.7]))
        a = random_search_extremum(problem, trials=200, seed=3, hill_steps=20)
        b = random_search_extremum(problem, trials=200, seed=3, hill_steps=20)
        assert a.best_sampled == b.best_sampled and a.best_refined == b.best_refined

    def test_rejects_zero_trials(self):
        nu = Dist([0.4, 0.6])
        with pytest.raises(InputValidationError):
            random_search_extremum(IIDVariationalProblem(Alpha(2.0), nu, nu), trials=0)
