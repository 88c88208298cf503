"""Enumeration engines: odometer BAT, frontier DFS, UGFM and brute-force oracles"""

from amin_rel.engines.bat import (
    BatCounters,
    enumerate_odometer,
    feasible_vectors,
    odometer,
    odometer_target_buckets,
    reliability_odometer,
    reliability_one_to_sink,
    visited_formula,
)
from amin_rel.engines.frontier import (
    FrontierState,
    enumerate_frontier_dfs,
    frontier_target_buckets,
    iter_frontier,
    reliability_by_target_subset,
    reliability_frontier,
)
from amin_rel.engines.oracle import (
    BudgetExceeded,
    brute_force_feasible_count,
    brute_force_reliability,
)
from amin_rel.engines.ugfm import (
    TermCapExceeded,
    UgfmStats,
    UgfPolynomial,
    UgfTerm,
    compose,
    node_ugf,
    reliability_ugfm,
    subnet_ugfs,
    ugfm_target_buckets,
)

__all__ = [
    "BatCounters",
    "BudgetExceeded",
    "FrontierState",
    "TermCapExceeded",
    "UgfPolynomial",
    "UgfTerm",
    "UgfmStats",
    "brute_force_feasible_count",
    "brute_force_reliability",
    "compose",
    "enumerate_frontier_dfs",
    "enumerate_odometer",
    "feasible_vectors",
    "frontier_target_buckets",
    "iter_frontier",
    "node_ugf",
    "odometer",
    "odometer_target_buckets",
    "reliability_by_target_subset",
    "reliability_frontier",
    "reliability_odometer",
    "reliability_one_to_sink",
    "reliability_ugfm",
    "subnet_ugfs",
    "ugfm_target_buckets",
    "visited_formula",
]
