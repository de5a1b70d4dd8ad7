"""Two parties fund opposed learning until one concedes.

Each party pays a flow cost only while it is behind and wins when the voter's
belief ends on its side of one half.  Strategies reduce to concession bounds;
the best responses are increasing (strategic substitutes), and their unique
fixed point moves in favor of the cheaper party.
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from collective_stopping import WarSpec, war_best_response, war_solve

spec = WarSpec(c1=0.1, c2=0.2, grid_n=256)
game = spec.build()
sol = war_solve(game)
print(f"costs (c1={spec.c1}, c2={spec.c2}) -> concession bounds "
      f"g*={sol.lower:.3f}, G*={sol.upper:.3f} ({sol.sweeps} sweeps)")

for c1 in (0.05, 0.1, 0.2, 0.4):
    s = war_solve(WarSpec(c1=c1, c2=0.2, grid_n=256).build())
    print(f"  c1={c1:<4} -> (g*, G*) = ({s.lower:.3f}, {s.upper:.3f})")
print("cheaper party 1 concedes later AND pushes party 2 to concede earlier")

pts = game.grid.points
half = game.half_idx
uppers = pts[half + 1::4]
lowers = pts[:half + 1:4]
b1 = [war_best_response(game, 1, float(G)) for G in uppers]
b2 = [war_best_response(game, 2, float(g)) for g in lowers]

fig, ax = plt.subplots(figsize=(5.5, 5))
ax.plot(b1, uppers, label="party 1 concession given G")
ax.plot(lowers, b2, label="party 2 concession given g")
ax.plot([sol.lower], [sol.upper], "ko", label="fixed point")
ax.set_xlabel("party 1 bound g")
ax.set_ylabel("party 2 bound G")
ax.legend(fontsize=8)
fig.tight_layout()
out = __file__.replace(".py", ".svg")
fig.savefig(out)
print(f"figure -> {out}")
