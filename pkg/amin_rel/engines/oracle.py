"""
Brute-force ground truth.

Two oracles that share no code with the engines:
- brute_force_reliability walks the raw probability space, one
  unconditional subset choice per transmitting node (no Z state at all).
- brute_force_feasible_count walks the full label space and re-implements
  the consistency test on its own.
"""

import math
import itertools
import logging
from typing import List, Optional

from amin_rel.config import get_settings
from amin_rel.model import AminNetwork, NodeSubset, StateDistribution

logger = logging.getLogger(__name__)


class BudgetExceeded(RuntimeError):
    """Enumeration space larger than the configured budget."""

    def __init__(self, size: int, budget: int):
        super().__init__(f"oracle space {size} exceeds budget {budget}")
        self.size = size
        self.budget = budget


def _senders(network: AminNetwork) -> List[int]:
    return [i for i in range(1, network.node_count + 1) if network.adjacency[i - 1]]


def _spread(network: AminNetwork, node: int, local: int) -> NodeSubset:
    out = 0
    for k, j in enumerate(network.adjacency[node - 1]):
        if local >> k & 1:
            out |= 1 << j
    return out


def _check_budget(size: int, budget: Optional[int]) -> None:
    budget = budget if budget is not None else get_settings().oracle_budget
    if size > budget:
        logger.warning(f"Oracle refused: {size} assignments > budget {budget}")
        raise BudgetExceeded(size, budget)


def brute_force_reliability(
    network: AminNetwork,
    dist: StateDistribution,
    required_targets: NodeSubset,
    budget: Optional[int] = None,
) -> float:
    """
    Sum of prod p_{i,J_i} over full assignments whose spread covers the targets.

    Every transmitting node draws J_i whether or not it is reached; only
    reached nodes pass the information on.

    Raises:
        BudgetExceeded: prod 2^Deg(i) above the budget
    """
    senders = _senders(network)
    _check_budget(math.prod(1 << network.degree(i) for i in senders), budget)

    parts = []
    for choice in itertools.product(
        *(range(1 << network.degree(i)) for i in senders)
    ):
        reached = 1 << 1
        for node, local in zip(senders, choice):
            if reached >> node & 1:
                reached |= _spread(network, node, local)
        if required_targets & ~reached:
            continue
        parts.append(math.prod(dist.tables[i][m] for i, m in zip(senders, choice)))
    return math.fsum(parts)


def brute_force_feasible_count(
    network: AminNetwork,
    required_targets: NodeSubset,
    budget: Optional[int] = None,
) -> int:
    """
    Count label vectors (every coordinate over 0..2^Deg) that are
    consistent and reach the required targets.

    Raises:
        BudgetExceeded: prod (2^Deg(i) + 1) above the budget
    """
    senders = _senders(network)
    _check_budget(math.prod((1 << network.degree(i)) + 1 for i in senders), budget)

    count = 0
    for labels in itertools.product(
        *(range((1 << network.degree(i)) + 1) for i in senders)
    ):
        reached = 1 << 1
        ok = True
        for node, label in zip(senders, labels):
            informed = bool(reached >> node & 1)
            if informed != (label > 0):
                ok = False
                break
            if informed:
                reached |= _spread(network, node, label - 1)
        if ok and not required_targets & ~reached:
            count += 1
    return count


__all__ = ["BudgetExceeded", "brute_force_feasible_count", "brute_force_reliability"]
