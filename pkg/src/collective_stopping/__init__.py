"""Solver and simulator for collective dynamic information-acquisition games.

Players jointly sample a public signal about a binary state and stop through
a decisive-coalition rule; terminal payoffs depend on the common posterior
belief and flow costs accrue while sampling.  The package computes the
ex-ante cost transform, constrained concave closures, and equilibrium
sampling regions, covers the committee-search, war-of-information, and
conclusive-Poisson special cases, and cross-validates everything by Monte
Carlo path simulation.
"""

__version__ = "0.1.0"

from .coalitions import (CoalitionRule, SamplingRegion, chairperson_rule,
                         classify_players, collective_region, is_decisive,
                         normalize_rule, player_envelopes, quota_rule,
                         unanimity_rule, unilateral_rule)
from .committee import (CommitteeSpec, StrongCertificate, committee_payoff,
                        one_sided_best_response, pivotal_players, strong_check,
                        strong_solve)
from .concavify import (ClosureResult, component_bounds, concave_closure,
                        constrained_closure, inward_closure_values,
                        outward_closure_values)
from .costs import (CostSpec, cost_transform, cost_transform_closed_form,
                    net_payoff)
from .distributions import (BinaryPolicy, PosteriorDistribution,
                            binary_from_bounds, is_mpc, is_mps_supported)
from .equilibrium import (EquilibriumCertificate, Game, GameSpec,
                          MisalignmentFamily, ParetoWeights, PlayerSpec,
                          RuleFamily, check_equilibrium, chord_payoff,
                          comparative_statics, efficient_region,
                          enumerate_interval_equilibria, extremal_equilibria)
from .grid import (BeliefGrid, GridFunction, PiecewiseLinearSpec, build_grid,
                   eval_pwl, sample_pwl)
from .montecarlo import SimConfig, SimReport, simulate, verify_cost_identity
from .applications import (PoissonGameSpec, WarSolution, WarSpec,
                           poisson_cost_weight, poisson_solve,
                           poisson_transform, war_best_response, war_solve)
from .process import CustomQvSpec, DiffusionSpec, PoissonSpec, qv_at
