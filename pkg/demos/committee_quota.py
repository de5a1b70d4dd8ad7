"""Committee search: quotas, chairs, and who turns out to be pivotal.

Five members with increasing stakes in the riskier alternative search
together before a vote.  With homogeneous sampling costs the whole coalition
rule collapses to two pivotal members, so strong equilibria are fixed points
of their one-sided best responses.  Raising the stopping quota (harder to
stop) widens learning; giving a member veto power can only widen it further.
"""

from collective_stopping import (CommitteeSpec, CostSpec, DiffusionSpec,
                                 chairperson_rule, pivotal_players, quota_rule,
                                 strong_solve)

stakes = (0.4, 0.7, 1.0, 1.5, 2.4)
print(f"stakes: {stakes}; member 3 is the swing voter "
      f"(threshold {1 / (1 + stakes[2]):.3f})\n")

for q in (2, 3, 4, 5):
    rule = quota_rule(q, 5)
    spec = CommitteeSpec(stakes=stakes, approval_quota=3, cost=CostSpec(0.05),
                         rule=rule, process=DiffusionSpec(1.0), grid_n=384)
    game = spec.build()
    lower, upper = pivotal_players(rule)
    certs = strong_solve(game)
    top = max(certs, key=lambda c: c.p_high - c.p_low)
    print(f"stop with {q} votes: pivots (lower={lower}, upper={upper}); "
          f"widest strong equilibrium ({top.p_low:.3f}, {top.p_high:.3f})")

print()
for chair in (1, 3):
    rule = chairperson_rule(3, chair, 5)
    spec = CommitteeSpec(stakes=stakes, approval_quota=3, cost=CostSpec(0.05),
                         rule=rule, process=DiffusionSpec(1.0), grid_n=384)
    game = spec.build()
    lower, upper = pivotal_players(rule)
    certs = strong_solve(game)
    top = max(certs, key=lambda c: c.p_high - c.p_low)
    print(f"3 votes + member {chair} veto: pivots ({lower}, {upper}); "
          f"widest strong equilibrium ({top.p_low:.3f}, {top.p_high:.3f})")
