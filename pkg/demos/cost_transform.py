"""From flow costs to belief-space costs.

A player paying a constant flow cost while a diffusion signal runs can price
any stopping rule ex ante: the expected total cost equals the expected value
of a convex potential at the stopping belief, minus its value at the prior.
This script builds the potential numerically, compares it with the closed
form available for constant costs, and plots both.
"""

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from collective_stopping import (CostSpec, DiffusionSpec, build_grid,
                                 cost_transform, cost_transform_closed_form)

grid = build_grid(1024, 1e-4)
c, sigma = 0.1, 1.0

phi = cost_transform(CostSpec(c), DiffusionSpec(sigma), grid)
ref = cost_transform_closed_form(c, sigma, grid)

# the two agree up to an affine function (the anchor never matters)
window = (grid.points >= 0.01) & (grid.points <= 0.99)
A = np.vstack([np.ones(window.sum()), grid.points[window]]).T
coef, *_ = np.linalg.lstsq(A, (phi.values - ref.values)[window], rcond=None)
resid = (phi.values - ref.values)[window] - A @ coef
print(f"constant cost {c}, sigma {sigma}")
print(f"sup |numeric - closed form| after affine fit: {np.abs(resid).max():.2e}")

# pricing a symmetric stopping interval (0.3, 0.7) from prior 0.5:
# both boundaries are equally likely, so the expected cost is the average
# potential at the bounds minus the potential at the prior
k3, k7, k5 = (grid.nearest_index(p) for p in (0.3, 0.7, 0.5))
price = 0.5 * (phi.values[k3] + phi.values[k7]) - phi.values[k5]
print(f"ex-ante cost of sampling on (0.3, 0.7) from 0.5: {price:.5f}")

fig, ax = plt.subplots(figsize=(6.5, 4))
ax.plot(grid.points, phi.values, label="numeric transform")
ax.plot(grid.points, ref.values, "--", label="closed form")
ax.set_xlabel("belief")
ax.set_ylabel("cost potential")
ax.set_ylim(-0.02, 1.0)
ax.legend()
fig.tight_layout()
out = __file__.replace(".py", ".svg")
fig.savefig(out)
print(f"figure -> {out}")
