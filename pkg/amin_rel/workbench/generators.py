"""Benchmark and property-test network families."""

import logging
from typing import List, Tuple

import numpy as np

from amin_rel.model import (
    AminNetwork,
    StateDistribution,
    transmitting_nodes,
    uniform_distribution,
)

logger = logging.getLogger(__name__)


def gen_semi_complete(n: int) -> Tuple[AminNetwork, StateDistribution]:
    """Every arc i -> j with i < j, target n, p = 1 / 2^Deg(i)."""
    if n < 2:
        raise ValueError(f"semi-complete network needs n >= 2, got {n}")
    arcs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    network = AminNetwork.from_arcs(n, arcs, [n])
    return network, uniform_distribution(network)


def _reaches(n: int, arcs: List[Tuple[int, int]]) -> bool:
    reached = 1 << 1
    for i, j in sorted(arcs):
        if reached >> i & 1:
            reached |= 1 << j
    return bool(reached >> n & 1)


def gen_random_amin(
    n: int,
    arc_probability: float,
    seed: int,
    dirichlet: bool = False,
) -> Tuple[AminNetwork, StateDistribution]:
    """
    Random AMIN from a seeded numpy Generator.

    Each candidate arc (i, j), i < j, is kept with arc_probability. When no
    1 -> n path survives, a chain through randomly picked intermediate nodes
    is added. The same seed always gives the same network and tables.

    Args:
        n: Node count (>= 2)
        arc_probability: In (0, 1]
        seed: Generator seed
        dirichlet: Draw each node table from a flat Dirichlet instead of
            using the uniform distribution
    """
    if n < 2:
        raise ValueError(f"random AMIN needs n >= 2, got {n}")
    if not 0.0 < arc_probability <= 1.0:
        raise ValueError(f"arc probability must be in (0, 1], got {arc_probability}")

    rng = np.random.default_rng(seed)
    arcs = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        if rng.random() < arc_probability
    ]

    if not _reaches(n, arcs):
        inner = rng.choice(np.arange(2, n), size=int(rng.integers(0, n - 1)), replace=False)
        chain = [1] + sorted(int(v) for v in inner) + [n]
        present = set(arcs)
        added = [(a, b) for a, b in zip(chain, chain[1:]) if (a, b) not in present]
        arcs.extend(added)
        logger.debug(f"seed {seed}: forced 1 -> {n} chain {chain}")

    network = AminNetwork.from_arcs(n, arcs, [n])
    if not dirichlet:
        return network, uniform_distribution(network)

    tables = {}
    for i in transmitting_nodes(network):
        size = 1 << network.degree(i)
        tables[i] = tuple(float(p) for p in rng.dirichlet(np.ones(size)))
    return network, StateDistribution(tables=tables)
