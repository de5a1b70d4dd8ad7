"""Conclusive good-news learning: wait for a breakthrough or give up.

With a Poisson signal that only fires in the good state, no-news beliefs
drift down a deterministic logit path and a breakthrough jumps to certainty.
Stopping policies therefore reduce to a single giving-up belief below the
prior.  The solver certifies giving-up bounds against the admissible
contraction (unilateral) or spread (unanimous) deviations.
"""

from collective_stopping import (CostSpec, PiecewiseLinearSpec, PlayerSpec,
                                 PoissonGameSpec, poisson_cost_weight,
                                 poisson_solve, poisson_transform,
                                 unanimity_rule, unilateral_rule)
from collective_stopping.grid import build_grid

lam, prior = 1.0, 0.4
grid = build_grid(256, 1e-3, pinned=[prior])

# the drift-time transform prices waiting along the no-news path
phi = poisson_transform(CostSpec(0.1), lam, grid, anchor=prior)
k = grid.nearest_index(0.2)
print(f"no-news drift from {prior} down to 0.2 costs "
      f"{phi.values[grid.index_of(prior)] - phi.values[k]:.4f} "
      f"at flow cost 0.1")

# the ex-ante kernel additionally accounts for paths that jump before the
# bound is reached (breakthrough outcomes themselves carry zero weight)
kernel = poisson_cost_weight(CostSpec(0.1), lam, grid, prior)
print(f"ex-ante cost weight of a stopping atom at 0.2: {kernel.values[k]:.4f}")

u = PiecewiseLinearSpec.from_points([(0.0, 0.6), (0.5, 0.0), (1.0, 1.0)])
for rule, name in ((unilateral_rule(2), "unilateral"),
                   (unanimity_rule(2), "unanimous")):
    spec = PoissonGameSpec(lam=lam, prior=prior,
                           players=(PlayerSpec(u, CostSpec(0.05)),
                                    PlayerSpec(u, CostSpec(0.05))),
                           rule=rule, grid_n=256, grid_delta=1e-3)
    passing = [c for c in poisson_solve(spec) if c.verdict]
    bounds = [round(c.p_low, 3) for c in passing]
    print(f"{name} stopping: {len(passing)} certified giving-up bounds; "
          f"lowest {min(bounds) if bounds else None}, "
          f"highest {max(bounds) if bounds else None}")
