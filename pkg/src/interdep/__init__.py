"""Survivability analysis and live restructuring of interdependent networks."""

from interdep.cascade import CascadeResult, cascade, impact_stats
from interdep.cycles import Cycle, CycleCapExceeded, enumerate_cycles, find_marginal_arcs
from interdep.genlab import GeneratorConfig, PathSunletSpec, generate_path_sunlet, generate_random, ma_saturate
from interdep.netmodel import ArcRef, InterdependentNetwork, ParseError, validate
from interdep.restructure import clustered_delta_h, decompose_clusters, delta_h, exhaustive_optimum, random_reassign
from interdep.survivability import (
    BudgetExceeded,
    HittingSet,
    survivability_exact,
    survivability_greedy,
    upper_bound,
)

__all__ = [
    "ArcRef",
    "BudgetExceeded",
    "CascadeResult",
    "Cycle",
    "CycleCapExceeded",
    "GeneratorConfig",
    "HittingSet",
    "InterdependentNetwork",
    "ParseError",
    "PathSunletSpec",
    "cascade",
    "clustered_delta_h",
    "decompose_clusters",
    "delta_h",
    "enumerate_cycles",
    "exhaustive_optimum",
    "find_marginal_arcs",
    "generate_path_sunlet",
    "generate_random",
    "impact_stats",
    "ma_saturate",
    "random_reassign",
    "survivability_exact",
    "survivability_greedy",
    "upper_bound",
    "validate",
]
