"""Committee search between two alternatives.

An odd committee ranks one alternative by strictly increasing stakes; after
search ends a vote with a fixed approval quota picks the alternative, so
every member's terminal payoff is piecewise linear with a jump at the common
decision threshold.  With homogeneous sampling costs the whole coalition rule
collapses to two pivotal members, one per side, and strong equilibria are
fixed points of their one-sided best responses anchored at the threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coalitions import CoalitionRule, SamplingRegion, is_blocking
from .costs import CostSpec, cost_transform, net_payoff
from .equilibrium import TOL_SCALE, region_payoff_values
from .grid import (GridFunction, LEFT_AUX_FRACTION, PiecewiseLinearSpec,
                   build_grid, sample_pwl)
from .process import DiffusionSpec


class CommitteeError(ValueError):
    pass


class NoFixedPointError(CommitteeError):
    def __init__(self, nearest, residual):
        self.nearest = nearest
        self.residual = residual
        super().__init__(
            f"no grid fixed point; nearest candidate {nearest} with residual {residual:.3g}")


def committee_payoff(stake: float, threshold: float) -> PiecewiseLinearSpec:
    """Terminal payoff 1 - p below the decision threshold, p * stake at and
    above it (continuous only for the member whose own threshold is pivotal)."""
    if stake <= 0:
        raise CommitteeError("stakes must be positive")
    if not 0 < threshold < 1:
        raise CommitteeError("threshold must be interior")
    xs = np.array([0.0, threshold, 1.0])
    left = np.array([1.0, 1.0 - threshold, stake])
    right = np.array([1.0, threshold * stake, stake])
    return PiecewiseLinearSpec(xs, left, right)


@dataclass(frozen=True)
class CommitteeSpec:
    """Odd committee with strictly increasing stakes and an approval quota.

    ``stakes[i-1]`` is member i's payoff from the riskier alternative in the
    good state; member i privately prefers it once the belief passes
    1 / (1 + stake).  ``approval_quota`` is the vote count needed to adopt
    the riskier alternative, which makes member ``approval_quota`` the voter
    whose threshold everyone inherits in their terminal payoff.
    """

    stakes: tuple[float, ...]
    approval_quota: int
    cost: CostSpec | tuple[CostSpec, ...]
    rule: CoalitionRule
    process: DiffusionSpec = DiffusionSpec(sigma=1.0)
    grid_n: int = 512
    grid_delta: float = 1e-4

    def __post_init__(self):
        n = len(self.stakes)
        if n < 3 or n % 2 == 0:
            raise CommitteeError(f"committee size must be odd and >= 3, got {n}")
        if any(b <= a for a, b in zip(self.stakes, self.stakes[1:])):
            raise CommitteeError("stakes must be strictly increasing")
        if any(v <= 0 for v in self.stakes):
            raise CommitteeError("stakes must be positive")
        m = (n + 1) // 2
        if not m <= self.approval_quota <= n:
            raise CommitteeError(
                f"approval quota must lie in {m}..{n}, got {self.approval_quota}")
        if self.rule.n_players != n:
            raise CommitteeError("rule is over a different committee size")

    @property
    def n_players(self) -> int:
        return len(self.stakes)

    @property
    def threshold(self) -> float:
        return 1.0 / (1.0 + self.stakes[self.approval_quota - 1])

    def cost_of(self, i: int) -> CostSpec:
        if isinstance(self.cost, CostSpec):
            return self.cost
        return self.cost[i - 1]

    def homogeneous_costs(self) -> bool:
        return isinstance(self.cost, CostSpec) or len(set(self.cost)) == 1

    def build(self) -> "CommitteeGame":
        w = self.threshold
        h = (1 - 2 * self.grid_delta) / (self.grid_n - 1)
        grid = build_grid(self.grid_n, self.grid_delta,
                          (w - LEFT_AUX_FRACTION * h, w))
        us, nets = [], []
        for i in range(1, self.n_players + 1):
            u = sample_pwl(committee_payoff(self.stakes[i - 1], w), grid)
            phi = cost_transform(self.cost_of(i), self.process, grid)
            us.append(u)
            nets.append(net_payoff(u, phi))
        return CommitteeGame(spec=self, grid=grid, us=tuple(us), nets=tuple(nets))


@dataclass(frozen=True)
class CommitteeGame:
    spec: CommitteeSpec
    grid: object
    us: tuple[GridFunction, ...]
    nets: tuple[GridFunction, ...]

    @property
    def threshold_idx(self) -> int:
        return self.grid.index_of(self.spec.threshold)

    @property
    def below_idx(self) -> int:
        """Grid point one spacing-epsilon below the threshold (the left-limit
        auxiliary point used by the limit conventions)."""
        return self.threshold_idx - 1

    def tolerance(self, i: int, scale: float = TOL_SCALE) -> float:
        v = self.nets[i - 1].values
        rng = float(v.max() - v.min())
        return scale * (rng if rng > 0 else 1.0)


def _anchored_chord(game: CommitteeGame, i: int, lo_idx, hi_idx) -> np.ndarray:
    """Payoff of stopping bounds (lo, hi) evaluated at the threshold."""
    pts = game.grid.points
    v = game.nets[i - 1].values
    w = game.spec.threshold
    lo_idx = np.asarray(lo_idx)
    hi_idx = np.asarray(hi_idx)
    xl, xh = pts[lo_idx], pts[hi_idx]
    vl, vh = v[lo_idx], v[hi_idx]
    same = hi_idx == lo_idx
    span = np.where(same, 1.0, xh - xl)
    out = (np.where(same, 0.0, xh - w) * vl + np.where(same, 0.0, w - xl) * vh) / span
    return np.where(same, vh, out)


def one_sided_best_response(game: CommitteeGame, i: int, side: str,
                            anchor: float) -> float:
    """Grid argmax of the threshold-anchored payoff over one stopping bound.

    ``side='upper'`` takes the lower bound as anchor (strictly below the
    threshold; at the threshold the limit convention evaluates one grid cell
    inside).  Ties break toward the smallest belief.  The lower-side response
    returns the threshold itself when the argmax sits at the last grid point
    below it, i.e. when only the limit attains the supremum.
    """
    w = game.spec.threshold
    k = game.threshold_idx
    pts = game.grid.points
    if side == "upper":
        if anchor > w:
            raise CommitteeError(f"upper-side anchor {anchor} above threshold {w}")
        a = min(game.grid.nearest_index(anchor), game.below_idx)
        cands = np.arange(k, len(pts))
        vals = _anchored_chord(game, i, np.full(len(cands), a), cands)
        return float(pts[cands[int(np.argmax(vals))]])
    if side == "lower":
        if anchor < w:
            raise CommitteeError(f"lower-side anchor {anchor} below threshold {w}")
        b = max(game.grid.nearest_index(anchor), k + 1)
        cands = np.arange(0, k)
        vals = _anchored_chord(game, i, cands, np.full(len(cands), b))
        j = int(np.argmax(vals))
        if cands[j] == game.below_idx:
            return w  # supremum only attained in the limit from below
        return float(pts[cands[j]])
    raise CommitteeError(f"side must be 'upper' or 'lower', got {side!r}")


def pivotal_players(rule: CoalitionRule) -> tuple[int, int]:
    """(lower pivot, upper pivot): the member whose one-sided response pins
    the lower stopping bound, and the one pinning the upper bound."""
    lower = min(max(g) for g in rule.minimal_coalitions)
    upper = max(min(g) for g in rule.minimal_coalitions)
    return lower, upper


@dataclass(frozen=True)
class StrongCertificate:
    """A fixed point of the pivotal one-sided responses.

    ``status`` is ``'strong'`` when the fixed point is certified strong by
    the pivotal-player reduction, ``'fixed point, strength unknown'``
    otherwise.  ``deviation_verdict`` is filled by the coalition-deviation
    scan when it has been run.
    """

    p_low: float
    p_high: float
    residual_low: float
    residual_high: float
    status: str
    deviation_verdict: bool | None = None


def strong_solve(game: CommitteeGame, deviation_scan: bool = False,
                 ) -> list[StrongCertificate]:
    """All grid fixed points of the pivotal pair of one-sided responses.

    Requires homogeneous sampling costs (the pivotal reduction is proved only
    there); exhaustive scan over upper-bound anchors plus damped alternation
    from the widest interval, residual unit one grid cell.  When the lower
    pivot does not exceed the upper pivot only the maximum fixed point is
    certified strong; the status of the others is left open.
    """
    spec = game.spec
    if not spec.homogeneous_costs():
        raise CommitteeError(
            "pivotal reduction needs homogeneous costs; certify profiles with "
            "equilibrium.check_equilibrium instead")
    lower_piv, upper_piv = pivotal_players(spec.rule)
    w = spec.threshold
    pts = game.grid.points
    cell = game.grid.cell()
    k = game.threshold_idx

    cands: list[tuple[float, float, float, float]] = []

    def probe(p_high: float):
        p_low = one_sided_best_response(game, lower_piv, "lower", p_high)
        back_high = one_sided_best_response(
            game, upper_piv, "upper", p_low if p_low < w else w)
        back_low = one_sided_best_response(
            game, lower_piv, "lower", back_high if back_high > w else w)
        r_high = abs(back_high - p_high)
        r_low = abs(back_low - p_low)
        cands.append((p_low, p_high, r_low, r_high))

    for j in range(k, len(pts)):
        probe(float(pts[j]))

    # damped alternation from the widest interval: converges onto the
    # extremal fixed point when the responses are monotone along the path
    p_high = float(pts[-1])
    for _ in range(len(pts)):
        p_low = one_sided_best_response(game, lower_piv, "lower", p_high)
        nxt = one_sided_best_response(
            game, upper_piv, "upper", p_low if p_low < w else w)
        if nxt == p_high:
            break
        p_high = 0.5 * (p_high + nxt) if abs(nxt - p_high) > 8 * cell else nxt
        p_high = float(pts[np.argmin(np.abs(pts - p_high))])
        if p_high < w:
            p_high = float(pts[k])
    probe(p_high)

    fixed = [c for c in cands if c[2] <= cell + 1e-12 and c[3] <= cell + 1e-12]
    if not fixed:
        best = min(cands, key=lambda c: c[2] + c[3])
        raise NoFixedPointError((best[0], best[1]), best[2] + best[3])

    merged: list[tuple[float, float, float, float]] = []
    for c in sorted(fixed, key=lambda c: (c[1], c[0])):
        dup = False
        for idx, m in enumerate(merged):
            if abs(c[0] - m[0]) <= cell + 1e-12 and abs(c[1] - m[1]) <= cell + 1e-12:
                if c[2] + c[3] < m[2] + m[3]:
                    merged[idx] = c
                dup = True
                break
        if not dup:
            merged.append(c)

    out = []
    widths = [c[1] - c[0] for c in merged]
    max_width = max(widths)
    for c, width in zip(merged, widths):
        if lower_piv > upper_piv:
            status = "strong"
        else:
            status = "strong" if width == max_width else "fixed point, strength unknown"
        out.append(StrongCertificate(p_low=c[0], p_high=c[1], residual_low=c[2],
                                     residual_high=c[3], status=status))
    if deviation_scan:
        out = [StrongCertificate(c.p_low, c.p_high, c.residual_low, c.residual_high,
                                 c.status,
                                 strong_check(game, (c.p_low, c.p_high)))
               for c in out]
    return sorted(out, key=lambda c: (c.p_low, c.p_high))


def strong_check(game: CommitteeGame, interval: tuple[float, float],
                 coarse: int = 64, tol_scale: float = TOL_SCALE) -> bool:
    """Scan coalitional one-sided deviations for one that weakly improves
    every deviator at every belief and strictly somewhere.

    Shrinking the collective interval needs a decisive deviating set;
    widening it needs a set meeting every coalition; mixed moves need both.
    Deviation bounds run over a coarse sub-grid (plus pinned points), keeping
    the scan O(coarse^2 * grid * players).
    """
    spec = game.spec
    w = spec.threshold
    lo, hi = interval
    if not lo <= w <= hi:
        return False  # one-sided intervals die to a collapse by everyone
    pts = game.grid.points
    k = game.threshold_idx
    n = len(pts)

    base = _interval_region(game, lo, hi)
    base_u = [region_payoff_values(net, base) for net in game.nets]
    tols = [game.tolerance(i, tol_scale) for i in range(1, spec.n_players + 1)]

    lows = _coarse_indices(game, range(0, k + 1), coarse // 2)
    highs = _coarse_indices(game, range(k, n), coarse // 2)
    lows = sorted(set(lows) | {game.grid.nearest_index(lo), k})
    highs = sorted(set(highs) | {game.grid.nearest_index(hi), k})

    for ia in lows:
        for ib in highs:
            a, b = float(pts[ia]), float(pts[ib])
            if (a, b) == (lo, hi):
                continue
            dev = _interval_region(game, a, b)
            weak, strict = set(), set()
            for i in range(1, spec.n_players + 1):
                du = region_payoff_values(game.nets[i - 1], dev) - base_u[i - 1]
                if float(du.min()) >= -tols[i - 1]:
                    weak.add(i)
                    if float(du.max()) > tols[i - 1]:
                        strict.add(i)
            if not strict:
                continue  # no deviator gains anywhere, so no group forms
            inward = a >= lo and b <= hi
            outward = a <= lo and b >= hi
            can_shrink = any(g <= weak for g in spec.rule.minimal_coalitions)
            can_widen = is_blocking(spec.rule, weak)
            if inward and can_shrink:
                return False
            if outward and can_widen:
                return False
            if not inward and not outward and can_shrink and can_widen:
                return False
    return True


def _interval_region(game: CommitteeGame, a: float, b: float) -> SamplingRegion:
    if a >= b:
        return SamplingRegion.empty(game.grid)
    return SamplingRegion.from_intervals(game.grid, [(a, b)])


def _coarse_indices(game: CommitteeGame, rng, budget: int) -> list[int]:
    idx = list(rng)
    if len(idx) <= budget:
        return idx
    step = max(1, len(idx) // budget)
    keep = set(idx[::step])
    keep.add(idx[-1])
    for p in game.grid.pinned:
        j = game.grid.nearest_index(p)
        if idx[0] <= j <= idx[-1]:
            keep.add(j)
    return sorted(keep)


def _refined_upper_response(game: CommitteeGame, i: int, p_low: float) -> float:
    """Parabolic refinement of the upper response around the grid argmax
    (used to measure response slopes without grid quantization)."""
    w = game.spec.threshold
    pts = game.grid.points
    a = game.grid.index_of(p_low)
    cands = np.arange(game.threshold_idx, len(pts))
    vals = _anchored_chord(game, i, np.full(len(cands), a), cands)
    j = int(np.argmax(vals))
    if j == 0 or j == len(cands) - 1:
        return float(pts[cands[j]])
    x = pts[cands[j - 1:j + 2]]
    y = vals[j - 1:j + 2]
    denom = (y[0] - 2 * y[1] + y[2])
    if denom >= 0:
        return float(x[1])
    # vertex of the parabola through the three bracketing samples
    d0, d2 = x[1] - x[0], x[2] - x[1]
    num = d0 * d0 * (y[1] - y[2]) - d2 * d2 * (y[1] - y[0])
    return float(x[1] - 0.5 * num / (d0 * (y[1] - y[2]) + d2 * (y[1] - y[0])))
