"""Who controls the stopping decision changes how much anyone learns.

Two players with different tastes for information sample a common diffusion
signal.  Under unilateral stopping either player can kill the process, so
equilibria sit inside every efficient region; under unanimous stopping both
must agree to stop, so equilibria can only be too large.  This script
enumerates interval equilibria under both rules and contrasts them with the
efficient benchmark.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from collective_stopping import (CostSpec, DiffusionSpec, GameSpec,
                                 ParetoWeights, PiecewiseLinearSpec,
                                 PlayerSpec, efficient_region,
                                 enumerate_interval_equilibria,
                                 extremal_equilibria, unanimity_rule,
                                 unilateral_rule)
from collective_stopping.equilibrium import region_payoff_values

u1 = PiecewiseLinearSpec.from_points([(0.0, 1.0), (0.45, 0.0), (1.0, 1.2)])
u2 = PiecewiseLinearSpec.from_points([(0.0, 0.9), (0.6, 0.1), (1.0, 1.0)])
players = (PlayerSpec(u1, CostSpec(0.03)), PlayerSpec(u2, CostSpec(0.03)))

games = {}
for name, rule in (("unilateral", unilateral_rule(2)),
                   ("unanimous", unanimity_rule(2))):
    spec = GameSpec(prior=0.5, players=players, process=DiffusionSpec(1.0),
                    rule=rule, grid_n=96, grid_delta=1e-3)
    games[name] = spec.build()

efficient = efficient_region(games["unilateral"], ParetoWeights((1.0, 1.0)))
print("efficient (equal-weights) region:", efficient.intervals())

for name, game in games.items():
    scan = enumerate_interval_equilibria(game)
    print(f"\n{name} stopping: {len(scan.regions)} certified interval equilibria")
    if scan.regions:
        (union, cert), minimal = extremal_equilibria(game, list(scan.regions))
        print("  maximum:", union.intervals() or "no learning")
        print("  minimal:", [m.intervals() or "no learning" for m in minimal])

fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
for ax, (name, game) in zip(axes, games.items()):
    scan = enumerate_interval_equilibria(game)
    (union, _), _ = extremal_equilibria(game, list(scan.regions))
    pts = game.grid.points
    for i in (1, 2):
        net = game.nets[i - 1]
        ax.plot(pts, net.values, lw=1.1, label=f"net payoff {i}")
        ax.plot(pts, region_payoff_values(net, union), ls="--", lw=1.0)
    for lo, hi in union.intervals():
        ax.axvspan(lo, hi, color="0.92", zorder=0)
    ax.set_title(f"{name}: maximum equilibrium")
    ax.set_xlabel("belief")
axes[0].legend(fontsize=8)
fig.tight_layout()
out = __file__.replace(".py", ".svg")
fig.savefig(out)
print(f"\nfigure -> {out}")
