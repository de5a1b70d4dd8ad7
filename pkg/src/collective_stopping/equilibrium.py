"""Equilibrium payoffs, certification, enumeration and comparative statics.

A profile of sampling regions is an equilibrium exactly when, for every
player and every belief, the payoff from letting the collective region play
out (a chord of the net payoff across the enclosing component) attains that
player's constrained concave closure.  The checker measures the worst
closure-minus-payoff slack per player; enumeration scans interval candidates
around the prior; the comparative-statics harness re-runs enumeration along
misalignment or rule axes and reports set-inclusion verdicts.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .coalitions import (CoalitionRule, SamplingRegion, _runs, classify_players,
                         collective_region, player_envelopes)
from .concavify import (constrained_closure_values, inward_closure_values,
                        outward_closure_values)
from .costs import CostSpec, cost_transform, net_payoff
from .grid import (BeliefGrid, GridFunction, PiecewiseLinearSpec,
                   build_grid, jump_pin_points, sample_pwl)

# Equality in the equilibrium conditions is tested as closure - payoff <= tol
# with tol proportional to the player's payoff range: on a shared grid the
# closure and the chord interpolate identical tabulated values, so no
# discretization slack is needed for exact grid candidates.
TOL_SCALE = 1e-9


class EquilibriumError(ValueError):
    pass


class ExtremalCertificationError(EquilibriumError):
    """Union of certified equilibria failed to certify (a discretization
    artifact worth surfacing, not swallowing)."""

    def __init__(self, certificate):
        self.certificate = certificate
        super().__init__("union of certified equilibria failed certification")


@dataclass(frozen=True)
class PlayerSpec:
    u: PiecewiseLinearSpec
    cost: CostSpec


@dataclass(frozen=True)
class ParetoWeights:
    """Nonnegative player weights, not all zero."""

    values: tuple[float, ...]

    def __post_init__(self):
        if any(v < 0 for v in self.values) or not any(v > 0 for v in self.values):
            raise EquilibriumError("weights must be nonnegative and not all zero")


@dataclass(frozen=True)
class GameSpec:
    """Declarative stopping game: prior, players, process, rule, grid."""

    prior: float
    players: tuple[PlayerSpec, ...]
    process: object
    rule: CoalitionRule
    grid_n: int = 512
    grid_delta: float = 1e-4
    extra_pinned: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.players) < 1:
            raise EquilibriumError("need at least one player")
        if self.rule.n_players != len(self.players):
            raise EquilibriumError("rule is over a different number of players")
        if not (self.grid_delta < self.prior < 1 - self.grid_delta):
            raise EquilibriumError(f"prior {self.prior} outside the grid interior")

    def build(self) -> "Game":
        from .process import PoissonSpec

        h = (1 - 2 * self.grid_delta) / (self.grid_n - 1)
        pins = [self.prior, *self.extra_pinned]
        pins += jump_pin_points([p.u for p in self.players], h)
        pins += jump_pin_points(
            [p.cost.c for p in self.players
             if isinstance(p.cost.c, PiecewiseLinearSpec)], h)
        grid = build_grid(self.grid_n, self.grid_delta, _dedup(pins))
        us = [sample_pwl(p.u, grid) for p in self.players]
        if isinstance(self.process, PoissonSpec):
            # no quadratic variation: the ex-ante transform lives in the
            # applications module, so the game compiles for simulation only
            phis = [GridFunction(grid, np.zeros(len(grid))) for _ in self.players]
        else:
            phis = [cost_transform(p.cost, self.process, grid)
                    for p in self.players]
        nets = [net_payoff(u, phi) for u, phi in zip(us, phis)]
        return Game(spec=self, grid=grid, us=tuple(us), phis=tuple(phis),
                    nets=tuple(nets))


def _dedup(points: Iterable[float], min_sep: float = 3e-12) -> tuple[float, ...]:
    out: list[float] = []
    for p in sorted(points):
        if not out or p - out[-1] > min_sep:
            out.append(p)
    return tuple(out)


@dataclass(frozen=True)
class Game:
    """A compiled game: grid and tabulated net payoffs ready for closures."""

    spec: GameSpec
    grid: BeliefGrid
    us: tuple[GridFunction, ...]
    phis: tuple[GridFunction, ...]
    nets: tuple[GridFunction, ...]

    @property
    def rule(self) -> CoalitionRule:
        return self.spec.rule

    @property
    def prior(self) -> float:
        return self.spec.prior

    @property
    def n_players(self) -> int:
        return len(self.us)

    @property
    def prior_idx(self) -> int:
        return self.grid.index_of(self.prior)

    def tolerance(self, i: int, scale: float = TOL_SCALE) -> float:
        v = self.nets[i - 1].values
        rng = float(v.max() - v.min())
        return scale * (rng if rng > 0 else 1.0)


def region_payoff_values(net: GridFunction, region: SamplingRegion) -> np.ndarray:
    """Per-belief payoff from the region playing out: the chord of the net
    payoff across the enclosing component inside the region, the net payoff
    itself outside."""
    pts = net.grid.points
    out = net.values.copy()
    last = len(pts) - 1
    for i, j in _runs(region.mask):
        lo, hi = max(i - 1, 0), min(j + 1, last)
        t = (pts[lo:hi + 1] - pts[lo]) / (pts[hi] - pts[lo])
        out[lo:hi + 1] = out[lo] + t * (net.values[hi] - net.values[lo])
    return out


def chord_payoff(game: Game, i: int, p_low: float, p_high: float, p: float) -> float:
    """Expected payoff of the binary policy stopping at the given bounds,
    seen from belief p."""
    net = game.nets[i - 1]
    g = game.grid
    if not (p_low <= p <= p_high):
        raise EquilibriumError(f"belief {p} outside [{p_low}, {p_high}]")
    if p_low == p_high:
        return float(net.values[g.index_of(p)])
    vlo = net.values[g.index_of(p_low)]
    vhi = net.values[g.index_of(p_high)]
    t = (p - p_low) / (p_high - p_low)
    return float(vlo + t * (vhi - vlo))


@dataclass(frozen=True)
class EquilibriumCertificate:
    """Worst closure-vs-payoff slack per player, with verdict.

    ``violations[i]`` is max over beliefs of (best deviation value - realized
    value) for player i+1; the verdict passes when every violation is within
    tolerance.  Slacks are never materially negative (the realized payoff is
    itself a feasible deviation).
    """

    region: SamplingRegion
    violations: tuple[float, ...]
    worst_beliefs: tuple[float, ...]
    tolerances: tuple[float, ...]
    verdict: bool
    vacuous: bool = False
    checked_players: tuple[int, ...] = ()
    warnings: tuple[str, ...] = ()
    profile: tuple[SamplingRegion, ...] | None = None


def check_equilibrium(game: Game, target, tol_scale: float = TOL_SCALE,
                      ) -> EquilibriumCertificate:
    """Certify a sampling region (all players using it) or a full profile.

    The single-region entry point only needs to examine players who can stop
    alone (best deviations curtail sampling) and players in every coalition
    (best deviations prolong it); everyone else cannot unilaterally move the
    collective region off itself.  When both classes are empty the check is
    vacuous: any common region passes, which is flagged.
    """
    _require_transform(game)
    if isinstance(target, SamplingRegion):
        return _check_single_region(game, target, tol_scale)
    profile = tuple(target)
    if len(profile) != game.n_players:
        raise EquilibriumError("profile must cover every player")
    region = collective_region(game.rule, profile)
    violations, worst, tols = [], [], []
    for i in range(1, game.n_players + 1):
        others = {j + 1: profile[j] for j in range(game.n_players) if j + 1 != i}
        outer, inner = player_envelopes(game.rule, i, others, grid=game.grid)
        v = constrained_closure_values(game.nets[i - 1], outer, inner)
        u = region_payoff_values(game.nets[i - 1], region)
        violations.append(float(np.max(v - u)))
        worst.append(float(game.grid.points[int(np.argmax(v - u))]))
        tols.append(game.tolerance(i, tol_scale))
        _assert_one_sided(v - u, game, i)
    verdict = all(v <= t for v, t in zip(violations, tols))
    warn = ("collective region touches the grid edge",) if region.touches_edge() else ()
    return EquilibriumCertificate(
        region=region, violations=tuple(violations), worst_beliefs=tuple(worst),
        tolerances=tuple(tols), verdict=verdict,
        checked_players=tuple(range(1, game.n_players + 1)),
        warnings=warn, profile=profile)


def _check_single_region(game, region: SamplingRegion, tol_scale: float):
    n_uni, n_una = classify_players(game.rule)
    checked = sorted(n_uni | n_una)
    warn = []
    if region.touches_edge() and not region.is_empty():
        warn.append("region touches the grid edge")
    if not checked:
        warn.append("vacuous: no player can move the common region alone; "
                    "see the committee module's strong-equilibrium refinement")
        return EquilibriumCertificate(
            region=region, violations=(), worst_beliefs=(), tolerances=(),
            verdict=True, vacuous=True, checked_players=(), warnings=tuple(warn))
    violations, worst, tols = [], [], []
    for i in checked:
        net = game.nets[i - 1]
        u = region_payoff_values(net, region)
        gap = np.full(len(game.grid), -np.inf)
        if i in n_uni:
            gap = np.maximum(gap, inward_closure_values(net, region) - u)
        if i in n_una:
            gap = np.maximum(gap, outward_closure_values(net, region) - u)
        violations.append(float(np.max(gap)))
        worst.append(float(game.grid.points[int(np.argmax(gap))]))
        tols.append(game.tolerance(i, tol_scale))
        _assert_one_sided(gap, game, i)
    verdict = all(v <= t for v, t in zip(violations, tols))
    return EquilibriumCertificate(
        region=region, violations=tuple(violations), worst_beliefs=tuple(worst),
        tolerances=tuple(tols), verdict=verdict,
        checked_players=tuple(checked), warnings=tuple(warn))


def _require_transform(game: Game) -> None:
    from .process import PoissonSpec

    if isinstance(game.spec.process, PoissonSpec):
        raise EquilibriumError(
            "closure-based checks need a quadratic-variation process; "
            "use applications.poisson_solve for conclusive Poisson learning")


def _assert_one_sided(gap: np.ndarray, game: Game, i: int) -> None:
    # the realized payoff is itself feasible, so the best deviation can never
    # fall materially below it
    floor = -1e-10 * max(1.0, game.tolerance(i, 1.0))
    if np.max(gap) < floor:
        raise EquilibriumError(
            f"player {i} slack {np.max(gap):.3e} below the feasibility floor; "
            "closure construction is inconsistent")


# ---------------------------------------------------------------------------
# interval enumeration


def _chord_dominance_matrix(net_values: np.ndarray, pts: np.ndarray,
                            lows, highs) -> np.ndarray:
    """viol[r, c] = max over the span of (net - chord) for the interval
    (lows[r], highs[c]): nonpositive exactly when the chord dominates, which
    for a lone stopper is the whole equilibrium condition."""
    lows = np.asarray(lows, dtype=np.intp)
    highs = np.asarray(highs, dtype=np.intp)
    out = np.empty((len(lows), len(highs)))
    last = int(highs[-1])
    cols = np.arange(len(highs))
    for r, ia in enumerate(lows):
        span = slice(ia, last + 1)
        x = pts[span]
        v = net_values[span]
        dx = x - x[0]
        pos = highs - ia
        slopes = (v[pos] - v[0]) / dx[pos]
        gap = v[:, None] - (v[0] + slopes[None, :] * dx[:, None])
        running = np.maximum.accumulate(gap, axis=0)
        out[r] = running[pos, cols]
    return out


@dataclass(frozen=True)
class IntervalScan:
    """Outcome of an interval-candidate scan around the prior."""

    regions: tuple[SamplingRegion, ...]
    certificates: tuple[EquilibriumCertificate, ...]
    vacuous: bool = False
    # index pairs into the candidate endpoint lists, for set algebra
    lows: tuple[int, ...] = ()
    highs: tuple[int, ...] = ()
    pass_pairs: tuple[tuple[int, int], ...] = ()
    includes_empty: bool = False


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("COLLECTIVE_STOPPING_THREADS", "1")))
    except ValueError:
        return 1


def enumerate_interval_equilibria(game: Game, scope: str = "single",
                                  include_empty: bool = True,
                                  coarse: int | None = None) -> IntervalScan:
    """All interval sampling regions around the prior that certify.

    ``scope='single'`` scans open intervals (a, b) with grid endpoints and
    a < prior < b (cost O(n^3); n <= 1024).  ``scope='two-interval'``
    additionally scans (a, m) u (m, b) holes (n <= 256; candidates can be
    thinned with ``coarse``).  The no-learning empty region is included as
    the degenerate candidate when it certifies.
    """
    _require_transform(game)
    if scope not in ("single", "two-interval"):
        raise EquilibriumError(f"unknown scope {scope!r}")
    n = len(game.grid)
    if scope == "single" and n > 1024:
        raise EquilibriumError("single-interval scan budget is n <= 1024")
    if scope == "two-interval" and n > 256:
        raise EquilibriumError("two-interval scan budget is n <= 256")

    n_uni, n_una = classify_players(game.rule)
    k = game.prior_idx
    lows = _thin(range(0, k), coarse, game)
    highs = _thin(range(k + 1, n), coarse, game)

    regions: list[SamplingRegion] = []
    certs: list[EquilibriumCertificate] = []
    pass_pairs: list[tuple[int, int]] = []
    vacuous = not (n_uni or n_una)

    def _check(mask: np.ndarray) -> EquilibriumCertificate:
        return _check_single_region(game, SamplingRegion(game.grid, mask), TOL_SCALE)

    includes_empty = False
    if include_empty:
        cert = _check(np.zeros(n, dtype=bool))
        if cert.verdict:
            regions.append(cert.region)
            certs.append(cert)
            includes_empty = True

    # pure lone-stopper rules reduce to chord dominance, which vectorizes
    # over all interval candidates at once
    if scope == "single" and n_uni and not n_una and lows and highs:
        return _scan_unilateral_fast(game, sorted(n_uni), lows, highs,
                                     regions, certs, includes_empty)

    candidates = [(ia, ib) for ia in lows for ib in highs]
    if scope == "two-interval":
        candidates = [(ia, im, ib) for ia in lows for ib in highs
                      for im in _thin(range(ia + 2, ib - 1), coarse, game)
                      if im != k]

    def _mask_for(cand) -> np.ndarray:
        mask = np.zeros(n, dtype=bool)
        if len(cand) == 2:
            ia, ib = cand
            mask[ia + 1:ib] = True
        else:
            ia, im, ib = cand
            mask[ia + 1:ib] = True
            mask[im] = False
        return mask

    def _run_chunk(chunk):
        out = []
        for cand in chunk:
            cert = _check(_mask_for(cand))
            if cert.verdict:
                out.append((cand, cert))
        return out

    workers = _threads()
    if workers > 1 and len(candidates) > 64:
        chunks = [candidates[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = [r for part in ex.map(_run_chunk, chunks) for r in part]
        results.sort(key=lambda rc: rc[0])
    else:
        results = _run_chunk(candidates)

    for cand, cert in results:
        regions.append(cert.region)
        certs.append(cert)
        if len(cand) == 2:
            pass_pairs.append(cand)

    return IntervalScan(regions=tuple(regions), certificates=tuple(certs),
                        vacuous=vacuous, lows=tuple(lows), highs=tuple(highs),
                        pass_pairs=tuple(pass_pairs),
                        includes_empty=includes_empty)


def _scan_unilateral_fast(game: Game, checked: list[int], lows, highs,
                          regions, certs, includes_empty) -> IntervalScan:
    pts = game.grid.points
    n = len(game.grid)
    viols = [_chord_dominance_matrix(game.nets[i - 1].values, pts, lows, highs)
             for i in checked]
    tols = [game.tolerance(i) for i in checked]
    ok = np.ones((len(lows), len(highs)), dtype=bool)
    for v, t in zip(viols, tols):
        ok &= v <= t
    pass_pairs = []
    for r, c in zip(*np.nonzero(ok)):
        ia, ib = lows[r], highs[c]
        mask = np.zeros(n, dtype=bool)
        mask[ia + 1:ib] = True
        region = SamplingRegion(game.grid, mask)
        worst = []
        for i in checked:
            net = game.nets[i - 1].values
            span = np.arange(ia, ib + 1)
            t = (pts[span] - pts[ia]) / (pts[ib] - pts[ia])
            chord = net[ia] + t * (net[ib] - net[ia])
            worst.append(float(pts[span[int(np.argmax(net[span] - chord))]]))
        violations = tuple(max(float(v[r, c]), 0.0) for v in viols)
        regions.append(region)
        certs.append(EquilibriumCertificate(
            region=region, violations=violations, worst_beliefs=tuple(worst),
            tolerances=tuple(tols), verdict=True,
            checked_players=tuple(checked)))
        pass_pairs.append((int(ia), int(ib)))
    return IntervalScan(regions=tuple(regions), certificates=tuple(certs),
                        vacuous=False, lows=tuple(lows), highs=tuple(highs),
                        pass_pairs=tuple(pass_pairs),
                        includes_empty=includes_empty)


def _thin(rng, coarse: int | None, game: Game):
    idx = list(rng)
    if coarse is None or len(idx) <= coarse:
        return idx
    step = max(1, len(idx) // coarse)
    keep = set(idx[::step])
    keep.update(i for i in (game.grid.nearest_index(p) for p in game.grid.pinned)
                if i in set(idx))
    return sorted(keep)


def extremal_equilibria(game: Game, equilibria: Sequence[SamplingRegion],
                        ) -> tuple[tuple[SamplingRegion, EquilibriumCertificate],
                                   tuple[SamplingRegion, ...]]:
    """Maximum (union, which must itself certify) and minimal elements."""
    if not equilibria:
        raise EquilibriumError("need a non-empty list of equilibria")
    mask = np.zeros(len(game.grid), dtype=bool)
    for r in equilibria:
        mask |= r.mask
    union = SamplingRegion(game.grid, mask)
    cert = check_equilibrium(game, union)
    if not cert.verdict:
        raise ExtremalCertificationError(cert)
    minimal = [r for r in equilibria
               if not any(q.issubset(r) and q != r for q in equilibria)]
    # deduplicate while preserving endpoint order
    seen, uniq = set(), []
    for r in minimal:
        key = r.mask.tobytes()
        if key not in seen:
            seen.add(key)
            uniq.append(r)
    return (union, cert), tuple(uniq)


def efficient_region(game: Game, weights: ParetoWeights,
                     tol_scale: float = TOL_SCALE) -> SamplingRegion:
    """Strict-dominance set of the unconstrained concave closure of the
    weighted sum of net payoffs; the unique efficient sampling region for
    these weights when the instance is generic."""
    _require_transform(game)
    if len(weights.values) != game.n_players:
        raise EquilibriumError("weights must cover every player")
    w = np.zeros(len(game.grid))
    for lam, net in zip(weights.values, game.nets):
        w = w + lam * net.values
    wf = GridFunction(game.grid, w)
    from .concavify import concave_closure
    hull = concave_closure(wf, (0, len(game.grid) - 1)).closure.values
    rng = float(w.max() - w.min())
    tol = tol_scale * (rng if rng > 0 else 1.0)
    return SamplingRegion(game.grid, hull - w > tol)


# ---------------------------------------------------------------------------
# comparative statics


@dataclass(frozen=True)
class MisalignmentFamily:
    """Two players with payoffs common +/- misalignment * private and a
    shared flow cost (the pivotal assumption behind the nesting result)."""

    common: PiecewiseLinearSpec
    private: PiecewiseLinearSpec
    misalignments: tuple[float, ...]
    cost: CostSpec
    process: object
    rule: CoalitionRule
    prior: float
    grid_n: int = 64
    grid_delta: float = 1e-4

    def game_at(self, b: float) -> Game:
        u1 = self.common + self.private.scale(b)
        u2 = self.common + self.private.scale(-b)
        # pin the component payoffs' jump points regardless of b so every
        # game in the family shares one grid (b = 0 would otherwise lose the
        # private jumps and shift the index arithmetic)
        h = (1 - 2 * self.grid_delta) / (self.grid_n - 1)
        extra = tuple(jump_pin_points([self.common, self.private], h))
        spec = GameSpec(prior=self.prior,
                        players=(PlayerSpec(u1, self.cost),
                                 PlayerSpec(u2, self.cost)),
                        process=self.process, rule=self.rule,
                        grid_n=self.grid_n, grid_delta=self.grid_delta,
                        extra_pinned=extra)
        return spec.build()


@dataclass(frozen=True)
class RuleFamily:
    """One payoff environment scanned across nested coalition rules."""

    players: tuple[PlayerSpec, ...]
    process: object
    rules: tuple[CoalitionRule, ...]
    prior: float
    grid_n: int = 64
    grid_delta: float = 1e-4

    def game_at(self, rule: CoalitionRule) -> Game:
        spec = GameSpec(prior=self.prior, players=self.players,
                        process=self.process, rule=rule,
                        grid_n=self.grid_n, grid_delta=self.grid_delta)
        return spec.build()


@dataclass
class ComparisonReport:
    axis: str
    labels: list
    equilibrium_counts: list[int]
    verdicts: list[dict]
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def comparative_statics(family) -> ComparisonReport:
    """Monotonicity report along a misalignment or rule axis.

    Every reported relation holds exactly for the continuous game, so any
    violation beyond tolerance is flagged as a bug rather than recorded as a
    finding.
    """
    if isinstance(family, MisalignmentFamily):
        return _misalignment_report(family)
    if isinstance(family, RuleFamily):
        return _rules_report(family)
    raise EquilibriumError(f"unknown family {type(family).__name__}")


def _scan_sets(scan: IntervalScan):
    regions = set(scan.pass_pairs)
    if scan.includes_empty:
        regions.add(())
    return regions


def _misalignment_report(fam: MisalignmentFamily) -> ComparisonReport:
    bs = sorted(fam.misalignments)
    games = {b: fam.game_at(b) for b in bs}
    grids = {g.grid for g in games.values()}
    if len(grids) != 1:
        raise EquilibriumError("family games must share one grid")
    scans = {b: enumerate_interval_equilibria(games[b]) for b in bs}
    report = ComparisonReport(axis="misalignment", labels=list(bs),
                              equilibrium_counts=[len(scans[b].regions) for b in bs],
                              verdicts=[])
    for b_lo, b_hi in zip(bs, bs[1:]):
        lo, hi = _scan_sets(scans[b_lo]), _scan_sets(scans[b_hi])
        nested = hi <= lo
        max_shrinks = _max_pair(hi) is None or _max_pair(lo) is None or \
            _pair_subset(_max_pair(hi), _max_pair(lo))
        min_ok = _minimal_not_strictly_smaller(hi, lo)
        report.verdicts.append({"pair": (b_lo, b_hi), "nested": nested,
                                "maximum_shrinks": max_shrinks,
                                "minimal_not_strictly_smaller": min_ok})
        if not (nested and max_shrinks and min_ok):
            report.violations.append(f"misalignment pair ({b_lo}, {b_hi})")
    return report


def _rules_report(fam: RuleFamily) -> ComparisonReport:
    from .coalitions import is_decisive
    for g, g2 in zip(fam.rules, fam.rules[1:]):
        if not all(is_decisive(g2, m) for m in g.minimal_coalitions):
            raise EquilibriumError("rules must be ordered by growing decisiveness")
    scans = [enumerate_interval_equilibria(fam.game_at(r)) for r in fam.rules]
    report = ComparisonReport(axis="rules", labels=list(fam.rules),
                              equilibrium_counts=[len(s.regions) for s in scans],
                              verdicts=[])
    for idx in range(len(fam.rules) - 1):
        small, large = _scan_sets(scans[idx]), _scan_sets(scans[idx + 1])
        mx_s, mx_l = _max_pair(small), _max_pair(large)
        max_ok = mx_l is None or mx_s is None or not _pair_strict_superset(mx_l, mx_s)
        mins_s = _minimal_pairs(small)
        mins_l = _minimal_pairs(large)
        min_ok = all(not _pair_strict_superset(ml, ms)
                     for ml in mins_l for ms in mins_s)
        report.verdicts.append({"pair_index": idx, "maximum_not_larger": max_ok,
                                "minimal_not_larger": min_ok})
        if not (max_ok and min_ok):
            report.violations.append(f"rule pair index {idx}")
    return report


def _max_pair(pairs: set):
    iv = [p for p in pairs if p]
    if not iv:
        return () if pairs else None
    return (min(a for a, _ in iv), max(b for _, b in iv))


def _pair_subset(p, q) -> bool:
    if p == ():
        return True
    if q == ():
        return False
    return q[0] <= p[0] and p[1] <= q[1]


def _pair_strict_superset(p, q) -> bool:
    return _pair_subset(q, p) and p != q


def _minimal_pairs(pairs: set):
    return [p for p in pairs
            if not any(_pair_subset(q, p) and q != p for q in pairs)]


def _minimal_not_strictly_smaller(hi: set, lo: set) -> bool:
    mins_hi = _minimal_pairs(hi)
    mins_lo = _minimal_pairs(lo)
    return all(not _pair_strict_superset(ml, mh)
               for mh in mins_hi for ml in mins_lo)
