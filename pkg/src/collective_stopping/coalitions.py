"""Decisive-coalition rules and sampling regions.

A stopping rule is the antichain of its minimal decisive coalitions over
players 1..n; decisiveness is monotone by construction.  A sampling region is
a finite union of open belief intervals with grid-point endpoints,
represented as a boolean mask over grid points (True = sampling continues
there), so that unions and intersections are exact O(n) mask operations and
intervals are recovered as maximal runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .grid import BeliefGrid, _check_same_grid


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class CoalitionRule:
    """Antichain of minimal decisive coalitions over players 1..n."""

    n_players: int
    minimal_coalitions: tuple[frozenset[int], ...]

    def __post_init__(self):
        if not self.minimal_coalitions:
            raise RuleError("need at least one decisive coalition")
        allp = set(range(1, self.n_players + 1))
        for g in self.minimal_coalitions:
            if not g or not g <= allp:
                raise RuleError(f"coalition {set(g)} not a non-empty subset of 1..{self.n_players}")
        for a in self.minimal_coalitions:
            for b in self.minimal_coalitions:
                if a is not b and a <= b:
                    raise RuleError("minimal coalitions must form an antichain")

    def coalitions_without(self, i: int) -> tuple[frozenset[int], ...]:
        return tuple(g for g in self.minimal_coalitions if i not in g)


def normalize_rule(coalitions: Iterable[Iterable[int]], n: int) -> CoalitionRule:
    """Reduce an arbitrary family of decisive coalitions to its antichain of
    minimal elements (the monotone closure is implied)."""
    sets = [frozenset(int(i) for i in g) for g in coalitions]
    if not sets:
        raise RuleError("need at least one decisive coalition")
    minimal = []
    for g in sets:
        if any(h < g for h in sets):
            continue
        if g not in minimal:
            minimal.append(g)
    minimal.sort(key=lambda g: (len(g), sorted(g)))
    return CoalitionRule(n_players=n, minimal_coalitions=tuple(minimal))


def unilateral_rule(n: int) -> CoalitionRule:
    return normalize_rule([{i} for i in range(1, n + 1)], n)


def unanimity_rule(n: int) -> CoalitionRule:
    return normalize_rule([set(range(1, n + 1))], n)


def quota_rule(q: int, n: int) -> CoalitionRule:
    """Stopping requires any q players: minimal coalitions are all q-subsets."""
    if not 1 <= q <= n:
        raise RuleError(f"quota {q} outside 1..{n}")
    return normalize_rule([set(g) for g in combinations(range(1, n + 1), q)], n)


def chairperson_rule(q: int, chair: int, n: int) -> CoalitionRule:
    """Quota rule where every decisive coalition must include the chair."""
    if not 1 <= chair <= n:
        raise RuleError(f"chair {chair} outside 1..{n}")
    coals = [set(g) for g in combinations(range(1, n + 1), max(q, 1)) if chair in g]
    return normalize_rule(coals, n)


def is_decisive(rule: CoalitionRule, stopped: Iterable[int]) -> bool:
    """A player set terminates sampling iff it contains a minimal coalition."""
    s = set(stopped)
    if not s <= set(range(1, rule.n_players + 1)):
        raise RuleError("stopped players outside 1..n")
    return any(g <= s for g in rule.minimal_coalitions)


def is_blocking(rule: CoalitionRule, players: Iterable[int]) -> bool:
    """True iff the set meets every minimal coalition, i.e. sampling cannot
    stop without at least one of these players agreeing."""
    s = set(players)
    return all(g & s for g in rule.minimal_coalitions)


def classify_players(rule: CoalitionRule) -> tuple[set[int], set[int]]:
    """(veto-free stoppers, universal members).

    The first set holds players forming singleton coalitions (they can stop
    sampling alone, as under unilateral stopping); the second holds players
    belonging to every minimal coalition (their consent is always needed, as
    under unanimous stopping).
    """
    n_uni = {next(iter(g)) for g in rule.minimal_coalitions if len(g) == 1}
    common = set.intersection(*(set(g) for g in rule.minimal_coalitions))
    return n_uni, common


class RegionError(ValueError):
    pass


@dataclass(frozen=True)
class SamplingRegion:
    """Open subset of the belief interval, as a mask over grid points."""

    grid: BeliefGrid
    mask: np.ndarray

    def __post_init__(self):
        if len(self.mask) != len(self.grid) or self.mask.dtype != bool:
            raise RegionError("mask must be a boolean array matching the grid")
        self.mask.setflags(write=False)

    @classmethod
    def empty(cls, grid: BeliefGrid) -> "SamplingRegion":
        return cls(grid, np.zeros(len(grid), dtype=bool))

    @classmethod
    def full_interior(cls, grid: BeliefGrid) -> "SamplingRegion":
        """The whole clipped interval, open: the two edge points stop."""
        mask = np.ones(len(grid), dtype=bool)
        mask[0] = mask[-1] = False
        return cls(grid, mask)

    @classmethod
    def from_intervals(cls, grid: BeliefGrid,
                       intervals: Sequence[tuple[float, float]]) -> "SamplingRegion":
        mask = np.zeros(len(grid), dtype=bool)
        for lo, hi in intervals:
            if lo >= hi:
                raise RegionError(f"interval ({lo}, {hi}) is not increasing")
            mask |= (grid.points > lo) & (grid.points < hi)
        return cls(grid, mask)

    def intervals(self) -> tuple[tuple[float, float], ...]:
        """Maximal open intervals; endpoints are the adjacent stopping grid
        points (grid edges stand in when a run touches them)."""
        out = []
        pts = self.grid.points
        for i, j in _runs(self.mask):
            lo = pts[i - 1] if i > 0 else pts[0]
            hi = pts[j + 1] if j < len(pts) - 1 else pts[-1]
            out.append((float(lo), float(hi)))
        return tuple(out)

    def touches_edge(self) -> bool:
        """A run starting or ending at a grid edge has no interior stopping
        point on that side; callers surface this as a warning."""
        m = self.mask
        return bool(m[0] or m[1] or m[-1] or m[-2])

    def is_empty(self) -> bool:
        return not self.mask.any()

    def contains_belief(self, p: float) -> bool:
        """Strictly inside one of the open intervals."""
        for lo, hi in self.intervals():
            if lo < p < hi:
                return True
        return False

    def union(self, other: "SamplingRegion") -> "SamplingRegion":
        _check_same_grid(self.grid, other.grid)
        return SamplingRegion(self.grid, self.mask | other.mask)

    def intersection(self, other: "SamplingRegion") -> "SamplingRegion":
        _check_same_grid(self.grid, other.grid)
        return SamplingRegion(self.grid, self.mask & other.mask)

    def issubset(self, other: "SamplingRegion") -> bool:
        _check_same_grid(self.grid, other.grid)
        return bool(np.all(other.mask | ~self.mask))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SamplingRegion):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.mask, other.mask)

    def __hash__(self) -> int:
        return hash((self.grid, self.mask.tobytes()))


def _runs(mask: np.ndarray):
    """(start, stop) index pairs of maximal True runs, inclusive."""
    idx = np.flatnonzero(mask)
    if len(idx) == 0:
        return []
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate([[idx[0]], idx[breaks + 1]])
    stops = np.concatenate([idx[breaks], [idx[-1]]])
    return list(zip(starts.tolist(), stops.tolist()))


def collective_region(rule: CoalitionRule,
                      profile: Sequence[SamplingRegion]) -> SamplingRegion:
    """Sampling continues while, in every minimal coalition, someone still
    samples: the intersection over coalitions of member-region unions."""
    if len(profile) != rule.n_players:
        raise RuleError(f"profile covers {len(profile)} players, rule has {rule.n_players}")
    grid = profile[0].grid
    for r in profile[1:]:
        _check_same_grid(grid, r.grid)
    mask = np.ones(len(grid), dtype=bool)
    for g in rule.minimal_coalitions:
        u = np.zeros(len(grid), dtype=bool)
        for j in g:
            u |= profile[j - 1].mask
        mask &= u
    return SamplingRegion(grid, mask)


def player_envelopes(rule: CoalitionRule, i: int,
                     profile_minus_i: dict[int, SamplingRegion] | Sequence[SamplingRegion],
                     grid: BeliefGrid | None = None) -> tuple[SamplingRegion, SamplingRegion]:
    """Outer and inner sampling envelopes for player i.

    The first region is the collective sampling region if i never stops
    (conventionally the full interior when i sits in every coalition); the
    second is the region where sampling continues no matter what i does
    (conventionally empty when {i} is itself decisive).  The second is always
    contained in the first.
    """
    regions = _profile_map(rule, i, profile_minus_i)
    if grid is None:
        grid = next(iter(regions.values())).grid
    for r in regions.values():
        _check_same_grid(grid, r.grid)

    without_i = rule.coalitions_without(i)
    if without_i:
        outer = np.ones(len(grid), dtype=bool)
        for g in without_i:
            u = np.zeros(len(grid), dtype=bool)
            for j in g:
                u |= regions[j].mask
            outer &= u
    else:
        outer = SamplingRegion.full_interior(grid).mask.copy()

    inner = np.ones(len(grid), dtype=bool)
    for g in rule.minimal_coalitions:
        u = np.zeros(len(grid), dtype=bool)
        for j in g:
            if j != i:
                u |= regions[j].mask
        inner &= u
    return SamplingRegion(grid, outer), SamplingRegion(grid, inner)


def _profile_map(rule, i, profile_minus_i) -> dict[int, SamplingRegion]:
    if isinstance(profile_minus_i, dict):
        regions = dict(profile_minus_i)
    else:
        others = [j for j in range(1, rule.n_players + 1) if j != i]
        if len(profile_minus_i) != len(others):
            raise RuleError("profile must cover every player except i")
        regions = dict(zip(others, profile_minus_i))
    expected = set(range(1, rule.n_players + 1)) - {i}
    if set(regions) != expected:
        raise RuleError(f"profile must cover exactly players {sorted(expected)}")
    return regions
