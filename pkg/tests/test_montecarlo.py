import numpy as np
import pytest

from collective_stopping.coalitions import (SamplingRegion, unanimity_rule,
                                            unilateral_rule)
from collective_stopping.costs import CostSpec
from collective_stopping.equilibrium import GameSpec, PlayerSpec
from collective_stopping.grid import PiecewiseLinearSpec
from collective_stopping.montecarlo import (SimConfig, _run_paths, simulate,
                                            verify_cost_identity)
from collective_stopping.process import DiffusionSpec, PoissonSpec


def diffusion_game(c=0.1, sigma=1.0, prior=0.5, pinned=(0.3, 0.7)):
    u = PiecewiseLinearSpec.from_points([(0.0, 1.0), (0.5, 0.0), (1.0, 1.0)])
    spec = GameSpec(prior=prior,
                    players=(PlayerSpec(u, CostSpec(c)),),
                    process=DiffusionSpec(sigma), rule=unilateral_rule(1),
                    grid_n=256, grid_delta=1e-4, extra_pinned=tuple(pinned))
    return spec.build()


def region_of(game, lo, hi):
    return SamplingRegion.from_intervals(game.grid, [(lo, hi)])


def test_empty_region_stops_at_once():
    game = diffusion_game()
    rep = simulate(game, SamplingRegion.empty(game.grid),
                   SimConfig(n_paths=100, dt=1e-3, seed=1))
    assert rep.mean_cost[0] == 0.0
    assert rep.mean_time == 0.0
    assert rep.mean_terminal[0] == pytest.approx(0.0, abs=1e-12)  # u(0.5) = 0


def test_reproducible_reports():
    game = diffusion_game()
    cfg = SimConfig(n_paths=2000, dt=1e-3, seed=42)
    r1 = simulate(game, region_of(game, 0.3, 0.7), cfg)
    r2 = simulate(game, region_of(game, 0.3, 0.7), cfg)
    assert r1.mean_terminal == r2.mean_terminal
    assert r1.mean_cost == r2.mean_cost
    assert np.array_equal(r1.histogram_counts, r2.histogram_counts)


def test_martingale_mean_and_hitting_probabilities():
    game = diffusion_game(prior=0.4)
    cfg = SimConfig(n_paths=20_000, dt=2e-4, seed=7)
    paths = _run_paths(game, region_of(game, 0.3, 0.7), cfg)
    assert paths.truncated.mean() == 0.0
    mean = paths.stop_beliefs.mean()
    se = paths.stop_beliefs.std(ddof=1) / np.sqrt(cfg.n_paths)
    assert abs(mean - 0.4) <= 3 * se
    low_mass = np.mean(paths.stop_beliefs < 0.4)
    p_theory = (0.7 - 0.4) / (0.7 - 0.3)
    se_mass = np.sqrt(p_theory * (1 - p_theory) / cfg.n_paths)
    overshoot_bias = 0.01  # O(sqrt(dt)) boundary allowance
    assert abs(low_mass - p_theory) <= 3 * se_mass + overshoot_bias


def test_mean_payoff_matches_chord():
    from collective_stopping.equilibrium import chord_payoff
    game = diffusion_game(c=0.0, prior=0.5)
    cfg = SimConfig(n_paths=20_000, dt=2e-4, seed=11)
    rep = simulate(game, region_of(game, 0.3, 0.7), cfg)
    expected = chord_payoff(game, 1, 0.3, 0.7, 0.5)
    allowance = 0.05  # exit overshoot at dt = 2e-4
    assert abs(rep.mean_terminal[0] - expected) <= 3 * rep.se_terminal[0] + allowance


def test_cost_identity_zero_cost():
    game = diffusion_game(c=0.0)
    rep = verify_cost_identity(game, region_of(game, 0.3, 0.7),
                               SimConfig(n_paths=2000, dt=1e-3, seed=3))
    assert rep.simulated[0] == 0.0
    assert abs(rep.transformed[0]) <= 1e-12
    assert rep.passed


def test_cost_identity_constant_cost():
    game = diffusion_game(c=0.1)
    rep = verify_cost_identity(game, region_of(game, 0.3, 0.7),
                               SimConfig(n_paths=30_000, dt=1e-4, seed=5))
    assert rep.passed, rep


def test_cost_identity_belief_dependent_cost():
    u = PiecewiseLinearSpec.from_points([(0.0, 1.0), (0.5, 0.0), (1.0, 1.0)])
    c = CostSpec(PiecewiseLinearSpec.from_points(
        [(0.0, 0.25), (0.5, 0.05), (1.0, 0.2)]))
    spec = GameSpec(prior=0.45, players=(PlayerSpec(u, c),),
                    process=DiffusionSpec(0.8), rule=unilateral_rule(1),
                    grid_n=256, grid_delta=1e-4, extra_pinned=(0.25, 0.65))
    game = spec.build()
    rep = verify_cost_identity(game, region_of(game, 0.25, 0.65),
                               SimConfig(n_paths=30_000, dt=1e-4, seed=9))
    assert rep.passed, rep


def test_clamp_events_rare():
    game = diffusion_game()
    rep = simulate(game, region_of(game, 0.3, 0.7),
                   SimConfig(n_paths=5000, dt=1e-3, seed=13))
    assert rep.clamp_fraction < 1e-3


def poisson_game(c=0.1, lam=1.0, prior=0.5):
    u = PiecewiseLinearSpec.from_points([(0.0, 0.2), (0.6, 0.1), (1.0, 1.5)])
    spec = GameSpec(prior=prior, players=(PlayerSpec(u, CostSpec(c)),),
                    process=PoissonSpec(lam), rule=unilateral_rule(1),
                    grid_n=256, grid_delta=1e-4, extra_pinned=(0.25,))
    return spec.build()


def test_poisson_logit_drift_rate():
    game = poisson_game(lam=1.3, prior=0.5)
    cfg = SimConfig(n_paths=5000, dt=1e-4, seed=17)
    paths = _run_paths(game, region_of(game, 0.25, 0.9), cfg)
    no_jump = paths.stop_beliefs < 0.9
    logit = np.log(paths.stop_beliefs[no_jump] / (1 - paths.stop_beliefs[no_jump]))
    slopes = (logit - 0.0) / paths.times[no_jump]
    assert np.max(np.abs(slopes + 1.3)) <= 1e-3


def test_poisson_breakthrough_fraction():
    lam, prior = 1.0, 0.5
    game = poisson_game(lam=lam, prior=prior)
    cfg = SimConfig(n_paths=40_000, dt=1e-4, seed=19)
    paths = _run_paths(game, region_of(game, 0.25, 0.9), cfg)
    # mass at certainty equals (p0 - lo) / (1 - lo) by Bayes plausibility
    lo = 0.25
    p_jump_theory = (prior - lo) / (1 - lo)
    frac = np.mean(paths.stop_beliefs == 1.0)
    se = np.sqrt(p_jump_theory * (1 - p_jump_theory) / cfg.n_paths)
    assert abs(frac - p_jump_theory) <= 3 * se


def test_poisson_cost_identity():
    game = poisson_game(c=0.1, lam=1.0, prior=0.5)
    rep = verify_cost_identity(game, region_of(game, 0.25, 0.9),
                               SimConfig(n_paths=50_000, dt=1e-4, seed=23))
    assert rep.passed, rep


def test_poisson_martingale_mean():
    game = poisson_game(lam=1.0, prior=0.5)
    cfg = SimConfig(n_paths=40_000, dt=1e-4, seed=29)
    paths = _run_paths(game, region_of(game, 0.25, 0.9), cfg)
    mean = paths.stop_beliefs.mean()
    se = paths.stop_beliefs.std(ddof=1) / np.sqrt(cfg.n_paths)
    assert abs(mean - 0.5) <= 3 * se


def test_unanimity_profile_region_is_union():
    u = PiecewiseLinearSpec.from_points([(0.0, 1.0), (0.5, 0.0), (1.0, 1.0)])
    spec = GameSpec(prior=0.5,
                    players=(PlayerSpec(u, CostSpec(0.05)),
                             PlayerSpec(u, CostSpec(0.05))),
                    process=DiffusionSpec(1.0), rule=unanimity_rule(2),
                    grid_n=128, grid_delta=1e-3, extra_pinned=(0.3, 0.6, 0.8))
    game = spec.build()
    profile = [region_of(game, 0.3, 0.6), region_of(game, 0.3, 0.8)]
    rep = simulate(game, profile, SimConfig(n_paths=2000, dt=1e-3, seed=31))
    paths = _run_paths(game, profile, SimConfig(n_paths=2000, dt=1e-3, seed=31))
    stopped_inside_union = (paths.stop_beliefs > 0.3 + 0.01) & \
        (paths.stop_beliefs < 0.8 - 0.01) & ~paths.truncated
    assert not stopped_inside_union.any()
    assert rep.truncated_fraction == paths.truncated.mean()
