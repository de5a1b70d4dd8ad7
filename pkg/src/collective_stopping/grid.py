"""Belief grids and exact piecewise-linear payoff representation.

Beliefs live on a clipped interval [delta, 1 - delta]: the cost transform
diverges at the endpoints for constant flow costs under diffusion learning, so
the open unit interval is never tabulated all the way to its edges.  Payoffs
may jump at interior breakpoints (a committee's terminal payoff jumps at the
decision threshold); a breakpoint therefore stores both a left and a right
value, and grid construction can pin an auxiliary point just below the jump so
that both branch values participate in hull computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Tolerance for collapsing nearly identical grid points.
DEDUP_TOL = 1e-12
# An auxiliary left-limit point sits this fraction of the nominal spacing
# below a payoff jump.
LEFT_AUX_FRACTION = 1e-3


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class BeliefGrid:
    """Strictly increasing belief points spanning [delta, 1 - delta]."""

    points: np.ndarray
    delta: float
    h: float
    pinned: tuple[float, ...] = ()

    def __post_init__(self):
        self.points.setflags(write=False)

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, BeliefGrid):
            return NotImplemented
        return self.delta == other.delta and np.array_equal(self.points, other.points)

    def __hash__(self) -> int:
        return hash((self.delta, self.points.tobytes()))

    def index_of(self, p: float, tol: float = 1e-9) -> int:
        """Index of the grid point equal to ``p`` (within ``tol``)."""
        i = int(np.argmin(np.abs(self.points - p)))
        if abs(self.points[i] - p) > tol:
            raise GridError(f"belief {p} is not a grid point")
        return i

    def nearest_index(self, p: float) -> int:
        return int(np.argmin(np.abs(self.points - p)))

    def cell(self) -> float:
        """Largest spacing between consecutive points (one 'grid cell')."""
        return float(np.max(np.diff(self.points)))


def build_grid(n: int, delta: float = 1e-4,
               pinned: Iterable[float] = ()) -> BeliefGrid:
    """Uniform grid on [delta, 1 - delta] merged with pinned beliefs.

    Pinned beliefs (the prior, payoff breakpoints, auxiliary left-limit
    points) appear exactly in the result; a uniform point within DEDUP_TOL of
    a pinned one is replaced by it.  Deterministic: identical inputs produce
    identical point lists.
    """
    if n < 16:
        raise GridError(f"need at least 16 grid points, got {n}")
    if not (0.0 < delta <= 1e-2):
        raise GridError(f"clip margin must lie in (0, 1e-2], got {delta}")
    pinned = tuple(sorted(float(p) for p in pinned))
    for p in pinned:
        if not (delta + DEDUP_TOL < p < 1.0 - delta - DEDUP_TOL):
            raise GridError(f"pinned belief {p} outside ({delta}, {1.0 - delta})")
    if any(b - a <= 2 * DEDUP_TOL for a, b in zip(pinned, pinned[1:])):
        raise GridError("pinned beliefs closer than the dedup tolerance")
    pts = list(np.linspace(delta, 1.0 - delta, n))
    for p in pinned:
        j = int(np.argmin([abs(q - p) for q in pts]))
        if abs(pts[j] - p) <= DEDUP_TOL:
            pts[j] = p  # snap the uniform point onto the pinned value
        else:
            pts.append(p)
    pts.sort()
    out = [pts[0]]
    for q in pts[1:]:
        if q - out[-1] > DEDUP_TOL:
            out.append(q)
        elif q in pinned:
            out[-1] = q
    points = np.array(out)
    h = (1.0 - 2.0 * delta) / (n - 1)
    return BeliefGrid(points=points, delta=float(delta), h=h, pinned=pinned)


@dataclass(frozen=True)
class PiecewiseLinearSpec:
    """Piecewise-linear function on [0, 1] with optional jumps.

    ``left[k]`` / ``right[k]`` are the one-sided values at breakpoint
    ``xs[k]``.  Between breakpoints the function interpolates linearly from
    ``right[k]`` to ``left[k + 1]``.  The function's value *at* a breakpoint
    follows the right branch (the convention used when sampling onto a grid).
    """

    xs: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        xs, left, right = self.xs, self.left, self.right
        if len(xs) < 2 or len(left) != len(xs) or len(right) != len(xs):
            raise GridError("breakpoint arrays must share a length >= 2")
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise GridError("breakpoints must span [0, 1]")
        if np.any(np.diff(xs) <= 0):
            raise GridError("breakpoints must be strictly increasing")
        if not (np.all(np.isfinite(left)) and np.all(np.isfinite(right))):
            raise GridError("breakpoint values must be finite")
        for a in (xs, left, right):
            a.setflags(write=False)

    @classmethod
    def from_points(cls, points: Sequence[tuple[float, float]]) -> "PiecewiseLinearSpec":
        """Continuous spec through ``(x, y)`` pairs."""
        pts = sorted(points)
        xs = np.array([x for x, _ in pts], dtype=float)
        ys = np.array([y for _, y in pts], dtype=float)
        return cls(xs=xs, left=ys.copy(), right=ys)

    @classmethod
    def from_breakpoints(cls, xs, left, right) -> "PiecewiseLinearSpec":
        return cls(xs=np.asarray(xs, dtype=float),
                   left=np.asarray(left, dtype=float),
                   right=np.asarray(right, dtype=float))

    def jump_points(self) -> tuple[float, ...]:
        """Interior breakpoints where the left and right values differ."""
        mism = np.abs(self.left - self.right) > 0.0
        return tuple(float(x) for x in self.xs[1:-1][mism[1:-1]])

    def scale(self, a: float) -> "PiecewiseLinearSpec":
        return PiecewiseLinearSpec(self.xs.copy(), a * self.left, a * self.right)

    def __add__(self, other: "PiecewiseLinearSpec") -> "PiecewiseLinearSpec":
        xs = np.unique(np.concatenate([self.xs, other.xs]))
        left = eval_pwl_many(self, xs, side="left") + eval_pwl_many(other, xs, side="left")
        right = eval_pwl_many(self, xs, side="right") + eval_pwl_many(other, xs, side="right")
        return PiecewiseLinearSpec(xs, left, right)


def eval_pwl(spec: PiecewiseLinearSpec, p: float, side: str = "right") -> float:
    """One-sided value at breakpoints, linear interpolation elsewhere."""
    return float(eval_pwl_many(spec, np.array([p]), side=side)[0])


def eval_pwl_many(spec: PiecewiseLinearSpec, ps: np.ndarray,
                  side: str = "right") -> np.ndarray:
    if side not in ("left", "right"):
        raise GridError(f"side must be 'left' or 'right', got {side!r}")
    ps = np.asarray(ps, dtype=float)
    if np.any((ps < 0.0) | (ps > 1.0)):
        raise GridError("beliefs outside [0, 1]")
    xs = spec.xs
    # segment index k with xs[k] <= p < xs[k+1]
    k = np.clip(np.searchsorted(xs, ps, side="right") - 1, 0, len(xs) - 2)
    x0, x1 = xs[k], xs[k + 1]
    # interpolate from the right value of the lower breakpoint to the left
    # value of the upper one
    t = (ps - x0) / (x1 - x0)
    out = spec.right[k] + t * (spec.left[k + 1] - spec.right[k])
    # beliefs landing on a breakpoint take the requested one-sided value
    lo_hit = np.abs(ps - x0) <= DEDUP_TOL
    hi_hit = np.abs(ps - x1) <= DEDUP_TOL
    bp_idx = np.where(hi_hit, k + 1, k)
    one_sided = (spec.left if side == "left" else spec.right)[bp_idx]
    return np.where(lo_hit | hi_hit, one_sided, out)


@dataclass(frozen=True)
class GridFunction:
    """Real values tabulated on a belief grid."""

    grid: BeliefGrid
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != len(self.grid):
            raise GridError("values length must equal grid length")
        self.values.setflags(write=False)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        _check_same_grid(self.grid, other.grid)
        return GridFunction(self.grid, self.values - other.values)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        _check_same_grid(self.grid, other.grid)
        return GridFunction(self.grid, self.values + other.values)

    def scale(self, a: float) -> "GridFunction":
        return GridFunction(self.grid, a * self.values)

    def at(self, p: float) -> float:
        """Linear interpolation between grid points."""
        return float(np.interp(p, self.grid.points, self.values))


def _check_same_grid(a: BeliefGrid, b: BeliefGrid) -> None:
    if not (a is b or a == b):
        raise GridError("grid mismatch")


def sample_pwl(spec: PiecewiseLinearSpec, grid: BeliefGrid) -> GridFunction:
    """Tabulate a piecewise-linear spec; grid points on a breakpoint take the
    right-value (pin an auxiliary point below the jump to expose the left
    branch to hull computations)."""
    return GridFunction(grid, eval_pwl_many(spec, grid.points, side="right"))


def jump_pin_points(specs: Iterable[PiecewiseLinearSpec], h: float) -> list[float]:
    """Breakpoints with jumps, each paired with its left-limit auxiliary
    point one spacing-epsilon below."""
    out: set[float] = set()
    for spec in specs:
        for b in spec.jump_points():
            out.add(b)
            out.add(b - LEFT_AUX_FRACTION * h)
    return sorted(out)
