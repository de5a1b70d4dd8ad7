"""Concave closures on belief grids.

The generic operation takes tabulated values, an index-interval scope and an
optional exclusion mask, and returns the upper concave envelope of the
unmasked points, evaluated by chord interpolation everywhere in scope.
Masked points simply do not participate (no -inf sentinel arithmetic), which
keeps the hull code total.  The constrained closures of the stopping game are
assembled from this primitive:

* inward closure: scope limited to the component of a region around p, no
  exclusions (a player who can stop anywhere inside the others' region);
* outward closure: full scope, the region itself excluded (a player who can
  only stop where the others have stopped);
* general coalition closure: scope limited to the component of the outer
  envelope, inner envelope excluded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coalitions import SamplingRegion, _runs
from .grid import GridFunction, _check_same_grid


class ClosureError(ValueError):
    pass


@dataclass(frozen=True)
class ClosureResult:
    """Closure values plus, per grid point, the hull chord attaining them.

    ``support_low``/``support_high`` hold grid indices of the chord's
    endpoints; points outside the scope carry the input value and their own
    index.
    """

    closure: GridFunction
    support_low: np.ndarray
    support_high: np.ndarray
    scope: tuple[int, int]


def component_bounds(p: float, region: SamplingRegion) -> tuple[float, float]:
    """Nearest stopping beliefs enclosing p; (p, p) if p already stops.

    Grid edges act as stopping points when a region runs into them (callers
    should treat that as a clipped-domain warning).
    """
    i = region.grid.index_of(p)
    lo, hi = component_bounds_idx(i, region)
    pts = region.grid.points
    return float(pts[lo]), float(pts[hi])


def component_bounds_idx(i: int, region: SamplingRegion) -> tuple[int, int]:
    mask = region.mask
    if not mask[i]:
        return i, i
    lo = i
    while lo > 0 and mask[lo]:
        lo -= 1
    hi = i
    last = len(mask) - 1
    while hi < last and mask[hi]:
        hi += 1
    # if the run touches an edge the edge index itself is returned
    return lo, hi


def upper_concave_hull(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Indices (into xs) of the upper concave hull, by monotone chain.

    xs must be strictly increasing.  Collinear points are kept as hull
    vertices (closed-hull tie convention), so closure-equals-input holds at
    every touching point.
    """
    n = len(xs)
    stack: list[int] = []
    for k in range(n):
        while len(stack) >= 2:
            o, a = stack[-2], stack[-1]
            cross = (xs[a] - xs[o]) * (ys[k] - ys[o]) - (ys[a] - ys[o]) * (xs[k] - xs[o])
            if cross > 0.0:
                stack.pop()
            else:
                break
        stack.append(k)
    return np.asarray(stack, dtype=np.intp)


def concave_closure(values: GridFunction, scope: tuple[int, int],
                    mask: SamplingRegion | None = None) -> ClosureResult:
    """Upper concave envelope of the unmasked points within the scope.

    Every in-scope grid point receives the chord value of the hull segment
    above it (hull vertices keep their input value exactly); masked in-scope
    points receive the chord bridging them.  Scope endpoints must be
    unmasked.
    """
    lo, hi = scope
    grid = values.grid
    if not (0 <= lo <= hi < len(grid)):
        raise ClosureError(f"scope {scope} outside grid")
    if mask is not None:
        _check_same_grid(grid, mask.grid)
        if mask.mask[lo] or mask.mask[hi]:
            raise ClosureError("scope endpoints must be unmasked")
        keep = ~mask.mask[lo:hi + 1]
    else:
        keep = np.ones(hi - lo + 1, dtype=bool)

    cand = np.flatnonzero(keep) + lo
    xs = grid.points[cand]
    ys = values.values[cand]
    hull_local = upper_concave_hull(xs, ys)
    hull_idx = cand[hull_local]
    hx = grid.points[hull_idx]
    hy = values.values[hull_idx]

    out = values.values.copy()
    sup_lo = np.arange(len(grid), dtype=np.intp)
    sup_hi = np.arange(len(grid), dtype=np.intp)

    span = np.arange(lo, hi + 1)
    px = grid.points[span]
    seg = np.clip(np.searchsorted(hx, px, side="right") - 1, 0, len(hx) - 2) \
        if len(hx) > 1 else np.zeros(len(px), dtype=np.intp)
    if len(hx) == 1:
        out[span] = hy[0]
        sup_lo[span] = hull_idx[0]
        sup_hi[span] = hull_idx[0]
    else:
        x0, x1 = hx[seg], hx[seg + 1]
        y0, y1 = hy[seg], hy[seg + 1]
        t = (px - x0) / (x1 - x0)
        out[span] = y0 + t * (y1 - y0)
        sup_lo[span] = hull_idx[seg]
        sup_hi[span] = hull_idx[seg + 1]
        # hull vertices keep their tabulated value bit-for-bit
        out[hull_idx] = values.values[hull_idx]
        sup_lo[hull_idx] = hull_idx
        sup_hi[hull_idx] = hull_idx

    return ClosureResult(closure=GridFunction(grid, out),
                         support_low=sup_lo, support_high=sup_hi,
                         scope=(lo, hi))


def inward_closure_values(net: GridFunction, region: SamplingRegion) -> np.ndarray:
    """Best-deviation value when stopping is allowed anywhere inside the
    region: per component, the unmasked closure over that component; the
    input value outside."""
    out = net.values.copy()
    for i, j in _runs(region.mask):
        lo = max(i - 1, 0)
        hi = min(j + 1, len(out) - 1)
        res = concave_closure(net, (lo, hi))
        out[lo:hi + 1] = res.closure.values[lo:hi + 1]
    return out


def _open_edges(region: SamplingRegion) -> SamplingRegion:
    """Clear the exclusion mask at the grid edges: the clipped boundary acts
    as a stopping point (a warning-level artifact of the clipped domain)."""
    if not (region.mask[0] or region.mask[-1]):
        return region
    m = region.mask.copy()
    m[0] = m[-1] = False
    return SamplingRegion(region.grid, m)


def outward_closure_values(net: GridFunction, region: SamplingRegion) -> np.ndarray:
    """Best-deviation value when stopping is only possible outside the
    region: full-scope closure with the region excluded."""
    res = concave_closure(net, (0, len(net.grid) - 1), mask=_open_edges(region))
    return res.closure.values.copy()


def constrained_closure_values(net: GridFunction, outer: SamplingRegion,
                               inner: SamplingRegion) -> np.ndarray:
    """Best-deviation value against an outer/inner envelope pair: per
    component of the outer region, the closure excluding the inner region;
    the input value outside the outer region."""
    _check_same_grid(net.grid, outer.grid)
    _check_same_grid(net.grid, inner.grid)
    if not inner.issubset(outer):
        raise ClosureError("inner envelope must be contained in the outer one")
    inner = _open_edges(inner)
    out = net.values.copy()
    for i, j in _runs(outer.mask):
        lo = max(i - 1, 0)
        hi = min(j + 1, len(out) - 1)
        res = concave_closure(net, (lo, hi), mask=inner)
        out[lo:hi + 1] = res.closure.values[lo:hi + 1]
    return out


def constrained_closure(i_player: int, net: GridFunction, rule,
                        profile_minus_i, p: float) -> float:
    """Best payoff player i can reach at belief p given the others' regions
    under the coalition rule; equals the net payoff where the others stop
    regardless of i."""
    from .coalitions import player_envelopes

    outer, inner = player_envelopes(rule, i_player, profile_minus_i,
                                    grid=net.grid)
    k = net.grid.index_of(p)
    if not outer.mask[k]:
        return float(net.values[k])
    lo, hi = component_bounds_idx(k, outer)
    res = concave_closure(net, (lo, hi), mask=_open_edges(inner))
    return float(res.closure.values[k])
