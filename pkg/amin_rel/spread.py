"""
Information propagation semantics shared by every enumeration engine.

A state vector holds one label per transmitting node (ascending labels).
Node 1 always holds the information; a reached node with label j >= 1
passes it to S_{i,j}. Because every arc goes from a lower to a higher
label, one ascending sweep settles the reached set.

A vector is consistent when exactly the reached transmitting nodes carry a
non-Z label, and feasible when it is consistent and its reached set covers
the required targets.
"""

import math
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from amin_rel.model import (
    Z_LABEL,
    AminNetwork,
    NodeSubset,
    StateDistribution,
    label_to_subset,
    transmitting_nodes,
)

logger = logging.getLogger(__name__)

SOURCE = 1
SOURCE_MASK = 1 << SOURCE

StateVector = Tuple[int, ...]


@dataclass(frozen=True)
class SpreadResult:
    """Outcome of propagating one state vector."""

    reached: NodeSubset  # always holds node 1
    consistent: bool
    reached_targets: NodeSubset


def _check_shape(network: AminNetwork, x: Sequence[int]) -> Tuple[int, ...]:
    nodes = transmitting_nodes(network)
    if len(x) != len(nodes):
        raise ValueError(
            f"state vector has {len(x)} coordinates, network has {len(nodes)} transmitting nodes"
        )
    return nodes


def propagate(network: AminNetwork, x: Sequence[int]) -> SpreadResult:
    """
    Spread information from node 1 under state vector x.

    Only reached nodes transmit. consistent is False as soon as a reached
    node sits at Z or an unreached node carries a label.
    """
    nodes = _check_shape(network, x)
    reached = SOURCE_MASK
    consistent = True

    for node, label in zip(nodes, x):
        hit = bool(reached & (1 << node))
        if hit != (label != Z_LABEL):
            consistent = False
        if hit and label != Z_LABEL:
            reached |= label_to_subset(network, node, label)

    return SpreadResult(
        reached=reached,
        consistent=consistent,
        reached_targets=reached & network.target_mask,
    )


def probability(
    network: AminNetwork, dist: StateDistribution, x: Sequence[int]
) -> float:
    """Pr(X): product of p_{i, x(i)} over non-Z coordinates, ascending."""
    nodes = _check_shape(network, x)
    return math.prod(
        dist.label_probability(node, label) for node, label in zip(nodes, x)
    )


def is_feasible(
    network: AminNetwork, x: Sequence[int], required_targets: NodeSubset
) -> bool:
    """Consistent, and every required target is reached."""
    result = propagate(network, x)
    return result.consistent and not (required_targets & ~result.reached)


def covers(reached: NodeSubset, required_targets: NodeSubset) -> bool:
    return not (required_targets & ~reached)


def advance(
    reached: np.ndarray,
    consistent: np.ndarray,
    node: int,
    labels,
    table: np.ndarray,
) -> None:
    """
    One step of the ascending sweep over a block of state vectors, in place.

    Args:
        reached: int64 reached bitmasks, one per vector
        consistent: bool flags, one per vector
        node: Node being swept (all lower nodes already swept)
        labels: The node's labels, an int array or one int for the block
        table: Global subset per label (label 0 decodes to 0)
    """
    hit = ((reached >> node) & 1).astype(bool)
    consistent &= hit == (labels > 0)
    reached |= np.where(hit, table[labels], 0)


def canonicalize(
    network: AminNetwork, path: Iterable[Tuple[int, int]]
) -> StateVector:
    """Flexible (node, label) path -> fixed-length vector, unlisted nodes at Z."""
    assigned = dict(path)
    return tuple(assigned.get(node, Z_LABEL) for node in transmitting_nodes(network))
