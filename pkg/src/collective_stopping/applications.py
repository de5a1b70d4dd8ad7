"""War-of-information and conclusive-Poisson-learning applications.

The war pits two parties with opposed indicator payoffs against each other;
each funds learning only while it is behind, so each strategy is a single
stopping bound on its own side of one half.  Best responses are coded
directly from the ex-ante objectives (the general closure machinery can
re-certify the solution independently, which catches sign errors).

Poisson learning replaces the diffusion with a conclusive good-news signal:
no-news beliefs drift down deterministically and a breakthrough jumps to
certainty, so stopping outcomes put mass at beliefs below the prior and at 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .coalitions import CoalitionRule, unanimity_rule, unilateral_rule
from .costs import CostSpec, PHI_REFINE, _refined_points, cost_transform
from .equilibrium import Game, GameSpec, PlayerSpec, TOL_SCALE
from .grid import (BeliefGrid, GridFunction, LEFT_AUX_FRACTION,
                   PiecewiseLinearSpec, build_grid, eval_pwl)
from .process import DiffusionSpec, PoissonSpec


class ApplicationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# war of information


def _one_sided_cost(level: float, pays_below: bool) -> CostSpec:
    """Flow cost paid only on one side of one half."""
    xs = np.array([0.0, 0.5, 1.0])
    if pays_below:
        left = np.array([level, level, 0.0])
        right = np.array([level, 0.0, 0.0])
    else:
        left = np.array([0.0, 0.0, level])
        right = np.array([0.0, level, level])
    return CostSpec(PiecewiseLinearSpec(xs, left, right))


@dataclass(frozen=True)
class WarSpec:
    """Two parties, prior one half, winner-take-all indicator payoffs.

    Party 1 wins when the belief ends above one half and pays ``c1`` per unit
    time while the belief is at or below one half; party 2 is the mirror
    image.  Strategies are a lower bound g <= 1/2 for party 1 and an upper
    bound G > 1/2 for party 2.
    """

    c1: float
    c2: float
    sigma: float = 1.0
    grid_n: int = 512
    grid_delta: float = 1e-4

    def __post_init__(self):
        if self.c1 <= 0 or self.c2 <= 0:
            raise ApplicationError("both flow costs must be positive")
        if self.sigma <= 0:
            raise ApplicationError("sigma must be positive")

    def build(self) -> "WarGame":
        h = (1 - 2 * self.grid_delta) / (self.grid_n - 1)
        grid = build_grid(self.grid_n, self.grid_delta,
                          (0.5 - LEFT_AUX_FRACTION * h, 0.5))
        process = DiffusionSpec(self.sigma)
        phi1 = cost_transform(_one_sided_cost(self.c1, pays_below=True),
                              process, grid, anchor=0.5)
        phi2 = cost_transform(_one_sided_cost(self.c2, pays_below=False),
                              process, grid, anchor=0.5)
        return WarGame(spec=self, grid=grid, phi1=phi1, phi2=phi2)


@dataclass(frozen=True)
class WarGame:
    spec: WarSpec
    grid: BeliefGrid
    phi1: GridFunction
    phi2: GridFunction

    @property
    def half_idx(self) -> int:
        return self.grid.index_of(0.5)


@dataclass(frozen=True)
class WarSolution:
    """Mutual best responses (g*, G*) bracketing one half."""

    lower: float
    upper: float
    residual_lower: float
    residual_upper: float
    sweeps: int


def _party1_objective(game: WarGame, g_idx: np.ndarray, upper: float) -> np.ndarray:
    """Win probability minus expected cost for party 1 quitting at g,
    given party 2 concedes at the upper bound."""
    pts = game.grid.points
    g = pts[g_idx]
    return ((upper - 0.5) * (-game.phi1.values[g_idx]) + (0.5 - g) * 1.0) / (upper - g)


def _party2_objective(game: WarGame, G_idx: np.ndarray, lower: float) -> np.ndarray:
    pts = game.grid.points
    G = pts[G_idx]
    return ((G - 0.5) * 1.0 + (0.5 - lower) * (-game.phi2.values[G_idx])) / (G - lower)


def war_best_response(game: WarGame, party: int, opponent_bound: float) -> float:
    """Grid argmax of the party's concession objective, smallest belief on
    ties.  Party 1 responds to an upper bound above one half with a quitting
    belief at or below it; party 2 mirrors."""
    pts = game.grid.points
    half = game.half_idx
    if party == 1:
        if not opponent_bound > 0.5:
            raise ApplicationError("party 1 responds to an upper bound above 1/2")
        cands = np.arange(0, half + 1)
        vals = _party1_objective(game, cands, opponent_bound)
    elif party == 2:
        if not opponent_bound <= 0.5:
            raise ApplicationError("party 2 responds to a lower bound at or below 1/2")
        cands = np.arange(half + 1, len(pts))
        vals = _party2_objective(game, cands, opponent_bound)
    else:
        raise ApplicationError("party must be 1 or 2")
    return float(pts[cands[int(np.argmax(vals))]])


def war_solve(game: WarGame, max_sweeps: int = 10_000) -> WarSolution:
    """Fixed point of the two concession responses by monotone alternation
    from the widest bracket."""
    lower = float(game.grid.points[0])
    upper = float(game.grid.points[-1])
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        new_lower = war_best_response(game, 1, upper)
        new_upper = war_best_response(game, 2, new_lower)
        if (new_lower, new_upper) == (lower, upper):
            break
        lower, upper = new_lower, new_upper
    else:
        raise ApplicationError(
            f"no convergence in {max_sweeps} sweeps; last bracket ({lower}, {upper})")
    r_lo = abs(war_best_response(game, 1, upper) - lower)
    r_hi = abs(war_best_response(game, 2, lower) - upper)
    cell = game.grid.cell()
    if r_lo > cell or r_hi > cell:
        raise ApplicationError(
            f"alternation settled off-fixed-point: residuals ({r_lo:.3g}, {r_hi:.3g})")
    return WarSolution(lower=lower, upper=upper, residual_lower=r_lo,
                       residual_upper=r_hi, sweeps=sweeps)


def war_scan(game: WarGame) -> list[tuple[float, float]]:
    """All mutual-best-response cells on the full 2-D grid scan (uniqueness
    cross-check; quadratic cost, keep the requested grid at or below 256)."""
    if game.spec.grid_n > 256:
        raise ApplicationError("2-D scan budget is n <= 256")
    pts = game.grid.points
    half = game.half_idx
    lows = np.arange(0, half + 1)
    highs = np.arange(half + 1, len(pts))
    # party 1's best g for every G, party 2's best G for every g
    best_g = {int(ib): war_best_response(game, 1, float(pts[ib])) for ib in highs}
    best_G = {int(ia): war_best_response(game, 2, float(pts[ia])) for ia in lows}
    out = []
    for ia in lows:
        g = float(pts[ia])
        G = best_G[int(ia)]
        if best_g[game.grid.index_of(G)] == g:
            out.append((g, G))
    return out


def war_to_game(spec: WarSpec) -> Game:
    """The war as a generic two-player unanimous-stopping game, for
    independent re-certification of a solution region.

    The tabulated payoff at exactly one half takes the right branch, so
    re-certification is exact only for solutions that keep one half strictly
    interior (any bracket with positive learning does).
    """
    u1 = PiecewiseLinearSpec(np.array([0.0, 0.5, 1.0]),
                             np.array([0.0, 0.0, 1.0]),
                             np.array([0.0, 1.0, 1.0]))
    u2 = PiecewiseLinearSpec(np.array([0.0, 0.5, 1.0]),
                             np.array([1.0, 1.0, 0.0]),
                             np.array([1.0, 0.0, 0.0]))
    gs = GameSpec(prior=0.5,
                  players=(PlayerSpec(u1, _one_sided_cost(spec.c1, True)),
                           PlayerSpec(u2, _one_sided_cost(spec.c2, False))),
                  process=DiffusionSpec(spec.sigma),
                  rule=unanimity_rule(2),
                  grid_n=spec.grid_n, grid_delta=spec.grid_delta)
    return gs.build()


# ---------------------------------------------------------------------------
# conclusive Poisson learning


def poisson_transform(c: CostSpec, lam: float, grid: BeliefGrid,
                      anchor: float | None = None,
                      refine: int = PHI_REFINE) -> GridFunction:
    """No-news drift-time transform: the single integral of c / (lam y (1-y)).

    For constant cost this is (c / lam) ln(q / (1 - q)) up to a constant; the
    difference across two beliefs prices the cost of drifting between them
    conditional on no breakthrough.
    """
    if lam <= 0:
        raise ApplicationError("lambda must be positive")
    iz = grid.nearest_index(0.5) if anchor is None else grid.index_of(anchor)
    fine, coarse = _refined_points(grid.points, refine)
    integrand = c.at(fine) / (lam * fine * (1.0 - fine))
    vals = cumulative_trapezoid(integrand, fine, initial=0.0)
    vals -= vals[coarse[iz]]
    return GridFunction(grid, vals[coarse].copy())


def poisson_cost_weight(c: CostSpec, lam: float, grid: BeliefGrid,
                        prior: float) -> GridFunction:
    """Ex-ante cost carried by a no-news stopping atom at q <= prior:
    (1 - q) * integral_q^prior c(y) / (lam y (1 - y)^2) dy.

    Breakthrough outcomes (mass at certainty) carry zero weight; this kernel
    reproduces the expected accumulated flow cost exactly, accounting for the
    sampling time paid by paths that jump before the no-news bound is hit.
    Validated against path simulation in the statistical test-bed.
    """
    if lam <= 0:
        raise ApplicationError("lambda must be positive")
    ip = grid.index_of(prior)
    fine, coarse = _refined_points(grid.points, PHI_REFINE)
    integrand = c.at(fine) / (lam * fine * (1.0 - fine) ** 2)
    acc = cumulative_trapezoid(integrand, fine, initial=0.0)
    acc -= acc[coarse[ip]]
    vals = np.maximum(-acc[coarse], 0.0) * (1.0 - grid.points)
    vals[ip:] = 0.0
    return GridFunction(grid, vals.copy())


@dataclass(frozen=True)
class PoissonGameSpec:
    """Stopping game driven by a conclusive good-news Poisson signal."""

    lam: float
    prior: float
    players: tuple[PlayerSpec, ...]
    rule: CoalitionRule
    grid_n: int = 512
    grid_delta: float = 1e-4

    def __post_init__(self):
        if self.lam <= 0:
            raise ApplicationError("lambda must be positive")
        if len(self.players) not in (1, 2):
            raise ApplicationError("the Poisson solver covers one or two players")
        if self.rule.n_players != len(self.players):
            raise ApplicationError("rule is over a different number of players")

    @property
    def process(self) -> PoissonSpec:
        return PoissonSpec(self.lam)

    def kind(self) -> str:
        n = len(self.players)
        if self.rule == unilateral_rule(n):
            return "unilateral"
        if self.rule == unanimity_rule(n):
            return "unanimity"
        raise ApplicationError(
            "the Poisson solver covers unilateral or unanimous stopping only")

    def build(self) -> "PoissonGame":
        self.kind()
        h = (1 - 2 * self.grid_delta) / (self.grid_n - 1)
        from .equilibrium import _dedup
        from .grid import jump_pin_points
        pins = [self.prior]
        pins += jump_pin_points([p.u for p in self.players], h)
        grid = build_grid(self.grid_n, self.grid_delta, _dedup(pins))
        objectives, top_values = [], []
        for p in self.players:
            from .grid import sample_pwl
            u = sample_pwl(p.u, grid)
            kernel = poisson_cost_weight(p.cost, self.lam, grid, self.prior)
            objectives.append(GridFunction(grid, u.values - kernel.values))
            top_values.append(eval_pwl(p.u, 1.0, side="right"))
        return PoissonGame(spec=self, grid=grid,
                           objectives=tuple(objectives),
                           top_values=tuple(top_values))


@dataclass(frozen=True)
class PoissonGame:
    """Compiled Poisson game: per-player objective u - cost kernel on the
    no-news branch, plus the payoff at certainty."""

    spec: PoissonGameSpec
    grid: BeliefGrid
    objectives: tuple[GridFunction, ...]
    top_values: tuple[float, ...]

    @property
    def prior_idx(self) -> int:
        return self.grid.index_of(self.spec.prior)


@dataclass(frozen=True)
class PoissonCandidate:
    """A no-news stopping bound with its certification slacks.

    The policy puts mass (1 - prior) / (1 - p_low) on stopping at ``p_low``
    and the rest on the breakthrough outcome at certainty.  Certification is
    by exhaustive admissible-deviation scan, so a passing bound is certified
    against the scanned deviations only.
    """

    p_low: float
    value: tuple[float, ...]
    slack: tuple[float, ...]
    verdict: bool


def _policy_value(game: PoissonGame, i: int, q_idx: int) -> float:
    """Value of stopping at the no-news belief q (or at certainty)."""
    p0 = game.spec.prior
    q = float(game.grid.points[q_idx])
    w_top = (p0 - q) / (1.0 - q)
    return float((1 - w_top) * game.objectives[i - 1].values[q_idx]
                 + w_top * game.top_values[i - 1])


def _hull_at(xs: np.ndarray, ys: np.ndarray, p: float) -> float:
    from .concavify import upper_concave_hull
    order = np.argsort(xs)
    hull = upper_concave_hull(xs[order], ys[order])
    return float(np.interp(p, xs[order][hull], ys[order][hull]))


def poisson_solve(spec: PoissonGameSpec, tol_scale: float = TOL_SCALE,
                  ) -> list[PoissonCandidate]:
    """Certified no-news stopping bounds for the given prior.

    Candidates are grid beliefs at or below the prior.  Under unilateral
    stopping a deviation contracts mass within [p_low, prior] + certainty;
    under unanimous stopping it spreads the no-news atom over beliefs at or
    below p_low + certainty.  A bound passes when no admissible deviation
    improves any player beyond tolerance.
    """
    game = spec.build()
    kind = spec.kind()
    pts = game.grid.points
    ip = game.prior_idx
    p0 = spec.prior
    out = []
    for q_idx in range(0, ip + 1):
        values, slacks, ok = [], [], True
        for i in range(1, len(spec.players) + 1):
            obj = game.objectives[i - 1].values
            rng = float(obj.max() - obj.min()) or 1.0
            tol = tol_scale * rng
            val = _policy_value(game, i, q_idx)
            if kind == "unilateral" and len(spec.players) > 1:
                xs = np.append(pts[q_idx:ip + 1], 1.0)
                ys = np.append(obj[q_idx:ip + 1], game.top_values[i - 1])
                best = _hull_at(xs, ys, p0)
                slack = best - val
            elif kind == "unilateral":
                # single decision maker: free choice over all lower bounds
                xs = np.append(pts[:ip + 1], 1.0)
                ys = np.append(obj[:ip + 1], game.top_values[i - 1])
                best = _hull_at(xs, ys, p0)
                slack = best - val
            else:
                xs = np.append(pts[:q_idx + 1], 1.0)
                ys = np.append(obj[:q_idx + 1], game.top_values[i - 1])
                best = _hull_at(xs, ys, float(pts[q_idx]))
                slack = best - float(obj[q_idx])
            values.append(val)
            slacks.append(float(slack))
            if slack > tol:
                ok = False
        out.append(PoissonCandidate(p_low=float(pts[q_idx]), value=tuple(values),
                                    slack=tuple(slacks), verdict=ok))
    return out
