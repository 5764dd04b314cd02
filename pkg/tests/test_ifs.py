import math

import numpy as np
import pytest

from parrondo_maps.circle import Angle
from parrondo_maps.ifs import (
    IfsConfig,
    IfsStats,
    bernoulli_sequence,
    expectation_recurrence_check,
    monte_carlo,
    run_ifs,
    sequence_rng,
    theoretical_bounds,
)
from parrondo_maps.planar import CylPoint


def small_config(**overrides):
    base = dict(p=0.5, a=5.0, seed=20240, horizon=400, n_sequences=100)
    base.update(overrides)
    return IfsConfig(**base)


class TestBernoulliSequences:
    def test_deterministic_per_seed_and_stream(self):
        a = bernoulli_sequence(0.3, 1000, seed=1, stream=7)
        b = bernoulli_sequence(0.3, 1000, seed=1, stream=7)
        np.testing.assert_array_equal(a, b)

    def test_streams_differ(self):
        a = bernoulli_sequence(0.5, 1000, seed=1, stream=0)
        b = bernoulli_sequence(0.5, 1000, seed=1, stream=1)
        assert not np.array_equal(a, b)

    def test_symbol_zero_frequency(self):
        # Binomial concentration: 3 standard errors around p.
        p, n = 0.3, 20000
        seq = bernoulli_sequence(p, n, seed=5)
        freq = float(np.mean(seq == 0))
        assert abs(freq - p) <= 3.0 * math.sqrt(p * (1 - p) / n)

    def test_boundary_probabilities_rejected(self):
        for bad in (0.0, 1.0, -0.2, 1.7):
            with pytest.raises(ValueError):
                bernoulli_sequence(bad, 10, seed=0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            bernoulli_sequence(0.5, 0, seed=0)

    def test_stream_rng_is_pcg64(self):
        gen = sequence_rng(0, 3)
        assert isinstance(gen.bit_generator, np.random.PCG64)


class TestTheoreticalBounds:
    def test_reference_values(self):
        b = theoretical_bounds(0.5, 5.0)
        assert b.a_min == 4.0
        assert b.K == 0.5
        assert b.pair_slope_lb == 0.5

    def test_boundary_expansion(self):
        assert theoretical_bounds(0.5, 4.0).K == 0.0

    def test_skewed_probability(self):
        b = theoretical_bounds(0.1, 12.0)
        assert b.K == pytest.approx(2.0 * (12.0 * 0.09 - 1.0), abs=1e-12)
        assert b.K == pytest.approx(0.16, abs=1e-12)
        assert theoretical_bounds(0.9, 5.0).a_min == pytest.approx(1.0 / 0.09, rel=1e-12)

    def test_probability_domain(self):
        with pytest.raises(ValueError):
            theoretical_bounds(0.0, 5.0)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            small_config(p=1.2)
        with pytest.raises(ValueError):
            small_config(horizon=401)
        with pytest.raises(ValueError):
            small_config(n_sequences=0)
        with pytest.raises(ValueError):
            small_config(w=0.3)

    def test_admissibility(self):
        assert small_config(a=5.0).admissible
        assert not small_config(a=4.0).admissible
        assert not small_config(a=3.0).admissible

    def test_inadmissible_configs_still_run(self):
        stats = monte_carlo(small_config(a=3.0, n_sequences=5, horizon=100))
        assert not stats.config.admissible
        assert 0.0 <= stats.escape_fraction <= 1.0


class TestRunIfs:
    def test_pairwise_gain_bounds(self):
        config = small_config(horizon=2000)
        run = run_ifs(config, stream=3)
        mixed = run.pair_gains[run.pair_mixed]
        unmixed = run.pair_gains[~run.pair_mixed]
        assert np.all(mixed >= config.a - 2.0)
        assert np.all(unmixed >= -2.0)

    def test_exact_pair_count_bound(self):
        config = small_config()
        for stream in range(10):
            run = run_ifs(config, stream=stream)
            m = config.pairs
            assert 0 <= run.k_m <= m
            assert run.delta_total >= config.a * run.k_m - 2.0 * m

    def test_pinned_ray_gives_exactly_minus_two_per_pair(self):
        config = small_config(horizon=100)
        run = run_ifs(config, start=CylPoint(0.0, Angle(0.0)), symbols=np.zeros(100, int))
        assert np.array_equal(run.pair_gains, np.full(50, -2.0))
        assert run.delta_total == -100.0
        assert run.k_m == 0

    def test_k_series_is_cumulative(self):
        run = run_ifs(small_config(), stream=1)
        np.testing.assert_array_equal(run.k_series, np.cumsum(run.pair_mixed))

    def test_symbol_length_checked(self):
        with pytest.raises(ValueError):
            run_ifs(small_config(horizon=10), symbols=np.zeros(4, int))

    def test_trace_is_consistent(self):
        config = small_config(horizon=50)
        run = run_ifs(config, stream=2)
        assert run.trace.rs.shape == (51,)
        assert run.delta_total == pytest.approx(float(np.sum(run.pair_gains)), abs=1e-9)


class TestMonteCarlo:
    def test_replay_is_bitwise_identical(self):
        config = small_config()
        s1 = monte_carlo(config)
        s2 = monte_carlo(config)
        np.testing.assert_array_equal(s1.deltas, s2.deltas)
        np.testing.assert_array_equal(s1.k_counts, s2.k_counts)

    def test_matches_individual_runs(self):
        config = small_config(n_sequences=7)
        stats = monte_carlo(config)
        for stream in range(7):
            run = run_ifs(config, stream=stream)
            assert stats.deltas[stream] == run.delta_total
            assert stats.k_counts[stream] == run.k_m

    def test_mixed_fraction_tracks_2pq(self):
        config = small_config(p=0.3, horizon=2000, n_sequences=100)
        stats = monte_carlo(config)
        two_pq = 2.0 * 0.3 * 0.7
        tol = 3.0 * math.sqrt(two_pq * (1 - two_pq) / config.pairs)
        assert abs(stats.mean_mixed_fraction - two_pq) <= tol

    def test_escape_at_defaults(self):
        stats = monte_carlo(small_config(horizon=2000, n_sequences=50))
        assert stats.escape_fraction == 1.0

    def test_merge(self):
        c1 = small_config(n_sequences=10)
        c2 = small_config(n_sequences=20)
        merged = monte_carlo(c1).merge(monte_carlo(c2))
        assert merged.n == 30
        assert merged.config.n_sequences == 30

    def test_merge_rejects_mismatched_configs(self):
        with pytest.raises(ValueError):
            monte_carlo(small_config(n_sequences=2)).merge(
                monte_carlo(small_config(n_sequences=2, a=6.0))
            )

    def test_stats_serialization_keys(self):
        d = monte_carlo(small_config(n_sequences=3, horizon=50)).to_dict()
        assert {
            "n_sequences",
            "pairs_per_sequence",
            "mean_pair_gain",
            "mean_mixed_fraction",
            "escape_fraction",
            "slope_se",
            "slope_ci_low",
            "slope_ci_high",
        } == set(d)


class TestRecurrence:
    def test_satisfied_at_defaults(self):
        config = small_config()
        check = expectation_recurrence_check(config)
        assert check.bound == 0.5
        assert check.satisfied
        assert check.per_pair_gain >= check.bound

    def test_larger_expansion_raises_bound(self):
        config = small_config(a=8.0, n_sequences=50)
        check = expectation_recurrence_check(config)
        assert check.bound == pytest.approx(2.0, abs=1e-12)
        assert check.satisfied

    def test_reuses_precomputed_stats(self):
        config = small_config(n_sequences=10)
        stats = monte_carlo(config)
        check = expectation_recurrence_check(config, stats=stats)
        assert check.per_pair_gain == stats.mean_pair_gain
