"""
Frontier depth-first search over flexible state vectors.

A flexible vector lists only the nodes that actually received the
information, as (node, label) pairs in expansion order. The search keeps a
frontier of reached-but-unexpanded nodes, always expands its smallest
label, and tries every non-Z label of that node. A branch ends when the
frontier empties; those leaves are exactly the consistent vectors.
"""

import math
import time
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Tuple

from amin_rel.engines.bat import BatCounters, odometer_target_buckets
from amin_rel.model import (
    AminNetwork,
    NodeSubset,
    StateDistribution,
    UnsupportedNetwork,
    members,
    subset_of,
    subset_table,
    transmitting_nodes,
)
from amin_rel.spread import SOURCE, covers

logger = logging.getLogger(__name__)

FlexibleVector = Tuple[Tuple[int, int], ...]

PathVisitor = Callable[[FlexibleVector, float], None]


@dataclass(frozen=True)
class FrontierState:
    """One node of the search tree."""

    path: FlexibleVector
    frontier: NodeSubset  # reached, not yet expanded
    reached_targets: NodeSubset
    probability: float


def _lowest(mask: NodeSubset) -> int:
    return (mask & -mask).bit_length() - 1


def iter_frontier(
    network: AminNetwork,
    dist: StateDistribution,
    required_targets: NodeSubset = 0,
) -> Iterator[Tuple[FrontierState, bool]]:
    """
    Yield every leaf of the search as (state, covers_required).

    Branches that can no longer reach a required target are cut before
    they are expanded, so with required_targets = 0 the leaves are all
    consistent vectors and with T they are the feasible ones plus the
    dead ends found at the bottom of the tree.
    """
    if not network.adjacency[SOURCE - 1]:
        raise UnsupportedNetwork("node 1 must transmit (out-degree >= 1)")

    target_mask = network.target_mask
    transmitting = subset_of(transmitting_nodes(network))
    tables = {i: subset_table(network, i) for i in transmitting_nodes(network)}

    def expand(state: FrontierState) -> Iterator[Tuple[FrontierState, bool]]:
        if not state.frontier:
            yield state, covers(state.reached_targets, required_targets)
            return

        v = _lowest(state.frontier)
        # Only labels above v can still join the reached set
        missing = required_targets & ~state.reached_targets
        if missing and _lowest(missing) <= v:
            return

        rest = state.frontier & ~(1 << v)
        probs = dist.tables[v]
        subsets = tables[v]
        for label in range(1, len(subsets)):
            s = subsets[label]
            yield from expand(
                FrontierState(
                    path=state.path + ((v, label),),
                    frontier=rest | (s & transmitting),
                    reached_targets=state.reached_targets | (s & target_mask),
                    probability=state.probability * probs[label - 1],
                )
            )

    root = FrontierState(
        path=(),
        frontier=1 << SOURCE,
        reached_targets=(1 << SOURCE) & target_mask,
        probability=1.0,
    )
    yield from expand(root)


def enumerate_frontier_dfs(
    network: AminNetwork,
    dist: StateDistribution,
    visitor: Optional[PathVisitor] = None,
    required_targets: Optional[NodeSubset] = None,
) -> BatCounters:
    """
    Depth-first search over flexible vectors, emitting the feasible ones.

    Args:
        network: Valid AMIN
        dist: State distribution
        visitor: Called as visitor(path, probability) per feasible vector
        required_targets: Defaults to all of T; 0 emits every consistent vector

    Returns:
        BatCounters (visited counts search leaves)
    """
    required = network.target_mask if required_targets is None else required_targets
    counters = BatCounters()
    start = time.perf_counter()
    for state, ok in iter_frontier(network, dist, required):
        counters.visited += 1
        if ok:
            counters.feasible += 1
            if visitor is not None:
                visitor(state.path, state.probability)
    counters.elapsed = time.perf_counter() - start
    return counters


def reliability_frontier(
    network: AminNetwork,
    dist: StateDistribution,
    required_targets: Optional[NodeSubset] = None,
) -> Tuple[float, BatCounters]:
    """R for a required target set (defaults to all of T) by frontier DFS."""
    probs: List[float] = []
    counters = enumerate_frontier_dfs(
        network, dist, lambda path, p: probs.append(p), required_targets
    )
    reliability = math.fsum(probs)
    logger.info(
        f"DFS: R={reliability:.6f}, leaves={counters.visited}, "
        f"feasible={counters.feasible}, {counters.elapsed:.3f}s"
    )
    return reliability, counters


def frontier_target_buckets(
    network: AminNetwork, dist: StateDistribution
) -> Tuple[Dict[NodeSubset, float], BatCounters]:
    """Probability of every consistent vector, bucketed by reached targets."""
    parts: Dict[NodeSubset, List[float]] = {}
    counters = BatCounters()
    start = time.perf_counter()
    for state, _ in iter_frontier(network, dist, 0):
        counters.visited += 1
        counters.feasible += 1
        parts.setdefault(state.reached_targets, []).append(state.probability)
    counters.elapsed = time.perf_counter() - start
    return {key: math.fsum(v) for key, v in sorted(parts.items())}, counters


def reliability_by_target_subset(
    network: AminNetwork,
    dist: StateDistribution,
    engine: str = "dfs",
    threads: Optional[int] = None,
) -> Dict[FrozenSet[int], float]:
    """
    R(tau) for every reached-target set tau that occurs.

    The empty set holds the failure mass and all buckets sum to 1.

    Args:
        engine: "dfs" (frontier search) or "odometer" (vectorized walk)

    Raises:
        ValueError: unknown engine
    """
    if engine == "dfs":
        buckets, _ = frontier_target_buckets(network, dist)
    elif engine == "odometer":
        buckets, _ = odometer_target_buckets(network, dist, threads=threads)
    else:
        raise ValueError(f"unknown bucket engine '{engine}', expected dfs or odometer")
    return {frozenset(members(key)): value for key, value in buckets.items()}


__all__ = [
    "FlexibleVector",
    "FrontierState",
    "enumerate_frontier_dfs",
    "frontier_target_buckets",
    "iter_frontier",
    "reliability_by_target_subset",
    "reliability_frontier",
]
