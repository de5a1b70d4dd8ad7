import numpy as np

from collective_stopping.coalitions import unanimity_rule, unilateral_rule
from collective_stopping.costs import CostSpec
from collective_stopping.equilibrium import GameSpec, PlayerSpec
from collective_stopping.grid import PiecewiseLinearSpec
from collective_stopping.process import DiffusionSpec


def brute_force_closure(xs, ys, keep):
    """All-chords O(n^2) oracle for the upper concave envelope.

    Independent of the monotone-chain implementation: for every admissible
    pair of kept points (pairs may coincide), write the chord across the
    bracketed span and keep the running maximum.
    """
    idx = np.flatnonzero(keep)
    out = np.full(len(xs), -np.inf)
    out[idx] = ys[idx]
    for pos, a in enumerate(idx):
        rest = idx[pos + 1:]
        if not len(rest):
            continue
        span = np.arange(a, rest[-1] + 1)
        dx = xs[span] - xs[a]
        slopes = (ys[rest] - ys[a]) / (xs[rest] - xs[a])
        chords = ys[a] + slopes[None, :] * dx[:, None]
        # chord (a, b) only covers points up to b
        cover = span[:, None] <= rest[None, :]
        chords = np.where(cover, chords, -np.inf)
        out[span] = np.maximum(out[span], chords.max(axis=1))
    return out


def dilate(mask, cells=1):
    out = mask.copy()
    for _ in range(cells):
        grown = out.copy()
        grown[1:] |= out[:-1]
        grown[:-1] |= out[1:]
        out = grown
    return out


def subset_with_slack(inner, outer, cells=1):
    """inner region contained in outer up to `cells` grid cells of boundary
    quantization."""
    return bool(np.all(dilate(outer.mask, cells) | ~inner.mask))


def strictly_larger_with_slack(big, small, cells=1):
    """big strictly contains small: exact containment, with the strictness
    judged beyond grid quantization so one-cell boundary noise never flags."""
    contains = bool(np.all(big.mask | ~small.mask))
    return contains and bool(np.any(big.mask & ~dilate(small.mask, cells)))


def random_pwl(rng, kinks=3, lo=-1.0, hi=1.0, jitter=0.0):
    """Continuous piecewise-linear payoff with random interior kinks."""
    xs = np.sort(rng.uniform(0.05, 0.95, size=kinks))
    xs = np.concatenate([[0.0], xs, [1.0]])
    ys = rng.uniform(lo, hi, size=len(xs))
    if jitter:
        ys = ys + rng.uniform(-jitter, jitter, size=len(ys))
    return PiecewiseLinearSpec.from_points(list(zip(xs, ys)))


def random_two_player_game(rng, rule_kind, grid_n=48, cost_lo=0.01,
                           cost_hi=0.08, jitter=0.0, prior=0.5):
    rule = unilateral_rule(2) if rule_kind == "unilateral" else unanimity_rule(2)
    players = tuple(
        PlayerSpec(random_pwl(rng, kinks=int(rng.integers(2, 5)), jitter=jitter),
                   CostSpec(float(rng.uniform(cost_lo, cost_hi))))
        for _ in range(2))
    spec = GameSpec(prior=prior, players=players, process=DiffusionSpec(1.0),
                    rule=rule, grid_n=grid_n, grid_delta=1e-3)
    return spec.build()
