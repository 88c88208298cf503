"""
Node-based binary-addition tree (BAT): odometer enumeration of state vectors.

Coordinates follow the ascending transmitting nodes. Coordinate 1 (node 1)
moves fastest and carries upward, like adding one to a binary number.
Node 1 ranges over labels 2..2^Deg(1) (Z and the empty state cannot reach
anything); every other transmitting node ranges over 0..2^Deg(i).

The walk is evaluated in blocks: the fastest coordinates form a block that
is swept once with numpy, and every combination of the slower coordinates
(taken in odometer order) finishes the sweep on a copy of that block. The
working set is bounded by the block size, never by the number of vectors.
"""

import math
import time
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from amin_rel.config import get_settings
from amin_rel.model import (
    AminNetwork,
    NodeSubset,
    StateDistribution,
    UnsupportedNetwork,
    format_subset,
    subset_table,
    transmitting_nodes,
)
from amin_rel.spread import SOURCE, SOURCE_MASK, StateVector, advance

logger = logging.getLogger(__name__)

# Largest node label an int64 reached-mask can hold
MAX_VECTORIZED_NODES = 62

# First node-1 label of the reliability walk; the bucket walk starts at 1
FIRST_SOURCE_LABEL = 2

Visitor = Callable[[StateVector, float], None]


class BatCounters(BaseModel):
    """Enumeration counters (N_BAT, N and wall-clock time)."""

    visited: int = 0
    feasible: int = 0
    elapsed: float = 0.0


# ============================================================================
# Odometer
# ============================================================================


def odometer(lows: Sequence[int], highs: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """
    Mixed-radix counter: coordinate 0 moves fastest and carries upward.

    With all lows 0 and all highs 1 this is the binary-addition walk over
    arc states; an empty coordinate list yields one empty vector.
    """
    x = list(lows)
    if any(lo > hi for lo, hi in zip(lows, highs)):
        return
    while True:
        yield tuple(x)
        v = 0
        while v < len(x):
            if x[v] < highs[v]:
                x[v] += 1
                break
            x[v] = lows[v]
            v += 1
        else:
            return


# ============================================================================
# Block sweep
# ============================================================================


@dataclass
class _Coordinate:
    node: int
    low: int
    radix: int
    subsets: np.ndarray  # global subset per label, Z -> 0
    probs: np.ndarray  # Pr per label, Z -> 1


class _ExactSum:
    """
    Exact running sum of float64 values, rounded once when read.

    Every double is an integer multiple of 2^-1074, so the total is kept as
    a Python int scaled by 2^_SCALE. The result does not depend on how the
    values were split into blocks or partitions.
    """

    # frexp exponents go down to -1073; 53 mantissa bits on top of that
    _SCALE = 1126
    _HALF = 26

    def __init__(self) -> None:
        self.total = 0

    def add(self, values: np.ndarray) -> None:
        if not values.size:
            return
        mantissa, exponent = np.frexp(values)
        digits = np.ldexp(mantissa, 53).astype(np.int64)
        exps, inverse = np.unique(exponent, return_inverse=True)
        inverse = inverse.ravel()
        # split the 53-bit digits so per-exponent int64 sums cannot overflow
        high = np.zeros(exps.size, dtype=np.int64)
        low = np.zeros(exps.size, dtype=np.int64)
        np.add.at(high, inverse, digits >> self._HALF)
        np.add.at(low, inverse, digits & ((1 << self._HALF) - 1))
        for e, h, lo in zip(exps.tolist(), high.tolist(), low.tolist()):
            self.total += ((h << self._HALF) + lo) << (e - 53 + self._SCALE)

    def merge(self, other: "_ExactSum") -> None:
        self.total += other.total

    @property
    def value(self) -> float:
        # int / int true division rounds correctly
        return self.total / (1 << self._SCALE)


@dataclass
class _Tally:
    visited: int = 0
    feasible: int = 0
    mass: _ExactSum = field(default_factory=_ExactSum)
    buckets: Dict[int, _ExactSum] = field(default_factory=dict)


def _plan(
    network: AminNetwork, dist: StateDistribution, first_label: int
) -> List[_Coordinate]:
    if network.node_count > MAX_VECTORIZED_NODES:
        raise UnsupportedNetwork(
            f"{network.node_count} nodes exceed the {MAX_VECTORIZED_NODES}-node bitmask limit"
        )
    nodes = transmitting_nodes(network)
    if not nodes or nodes[0] != SOURCE:
        raise UnsupportedNetwork("node 1 must transmit (out-degree >= 1)")

    coords = []
    for node in nodes:
        top = 1 << network.degree(node)
        low = first_label if node == SOURCE else 0
        probs = np.array((1.0,) + tuple(dist.tables[node]), dtype=np.float64)
        coords.append(
            _Coordinate(
                node=node,
                low=low,
                radix=top - low + 1,
                subsets=np.array(subset_table(network, node), dtype=np.int64),
                probs=probs,
            )
        )
    return coords


def _split_block(coords: List[_Coordinate], block_size: int) -> int:
    """Number of leading coordinates that fit in one block (at least one)."""
    size = 1
    count = 0
    for c in coords:
        if count and size * c.radix > block_size:
            break
        size *= c.radix
        count += 1
    return count


def _sweep(
    coords: List[_Coordinate],
    required: NodeSubset,
    target_mask: NodeSubset,
    block_size: int,
    visitor: Optional[Visitor],
    bucketed: bool,
) -> _Tally:
    tally = _Tally()
    nfast = _split_block(coords, block_size)
    fast, slow = coords[:nfast], coords[nfast:]

    size = math.prod(c.radix for c in fast)
    index = np.arange(size, dtype=np.int64)
    reached = np.full(size, SOURCE_MASK, dtype=np.int64)
    consistent = np.ones(size, dtype=bool)
    prob = np.ones(size, dtype=np.float64)
    fast_labels = []
    stride = 1
    for c in fast:
        labels = (index // stride) % c.radix + c.low
        stride *= c.radix
        advance(reached, consistent, c.node, labels, c.subsets)
        prob *= c.probs[labels]
        fast_labels.append(labels)
    del index

    logger.debug(
        f"Block of {size} vectors over nodes {[c.node for c in fast]}, "
        f"{math.prod(c.radix for c in slow)} blocks"
    )

    lows = [c.low for c in slow]
    highs = [c.low + c.radix - 1 for c in slow]
    for slow_labels in odometer(lows, highs):
        r = reached.copy()
        ok = consistent.copy()
        for c, label in zip(slow, slow_labels):
            advance(r, ok, c.node, label, c.subsets)
        tally.visited += size

        hit = ok & ((r & required) == required)
        count = int(np.count_nonzero(hit))
        if not count and not bucketed:
            continue

        # Pr(X) multiplied in coordinate order, whatever the block split
        p = prob.copy()
        for c, label in zip(slow, slow_labels):
            p *= c.probs[label]

        if bucketed:
            keys = r[ok] & target_mask
            if keys.size:
                p_ok = p[ok]
                uniq, inverse = np.unique(keys, return_inverse=True)
                inverse = inverse.ravel()
                for idx, key in enumerate(uniq.tolist()):
                    tally.buckets.setdefault(key, _ExactSum()).add(p_ok[inverse == idx])

        if not count:
            continue
        tally.feasible += count
        tally.mass.add(p[hit])

        if visitor is not None:
            for k in np.flatnonzero(hit).tolist():
                vector = tuple(int(labels[k]) for labels in fast_labels) + slow_labels
                visitor(vector, float(p[k]))

    return tally


def _partitions(coords: List[_Coordinate], threads: int) -> List[List[_Coordinate]]:
    """Split node 1's label range into contiguous, ascending partitions."""
    head = coords[0]
    threads = max(1, min(threads, head.radix))
    base, extra = divmod(head.radix, threads)
    parts = []
    low = head.low
    for k in range(threads):
        radix = base + (1 if k < extra else 0)
        parts.append(
            [_Coordinate(head.node, low, radix, head.subsets, head.probs)] + coords[1:]
        )
        low += radix
    return parts


def _run(
    network: AminNetwork,
    dist: StateDistribution,
    required: NodeSubset,
    first_label: int,
    visitor: Optional[Visitor],
    bucketed: bool,
    threads: Optional[int],
    block_size: Optional[int],
) -> Tuple[_Tally, float]:
    settings = get_settings()
    threads = threads or settings.threads
    block_size = block_size or settings.block_size

    start = time.perf_counter()
    coords = _plan(network, dist, first_label)
    target_mask = network.target_mask

    if threads <= 1:
        tallies = [_sweep(coords, required, target_mask, block_size, visitor, bucketed)]
    else:
        parts = _partitions(coords, threads)
        logger.info(f"Running {len(parts)} odometer partitions over node 1 labels")
        with ThreadPoolExecutor(max_workers=len(parts)) as executor:
            futures = [
                executor.submit(
                    _sweep, part, required, target_mask, block_size, visitor, bucketed
                )
                for part in parts
            ]
            # Reduce in partition order, not completion order
            tallies = [future.result() for future in futures]

    total = _Tally()
    for tally in tallies:
        total.visited += tally.visited
        total.feasible += tally.feasible
        total.mass.merge(tally.mass)
        for key, sums in tally.buckets.items():
            total.buckets.setdefault(key, _ExactSum()).merge(sums)
    return total, time.perf_counter() - start


# ============================================================================
# Public operations
# ============================================================================


def enumerate_odometer(
    network: AminNetwork,
    dist: StateDistribution,
    visitor: Optional[Visitor] = None,
    required_targets: Optional[NodeSubset] = None,
    threads: Optional[int] = None,
    block_size: Optional[int] = None,
) -> BatCounters:
    """
    Walk every state vector in odometer order and report feasible ones.

    Args:
        network: Valid AMIN with node 1 transmitting
        dist: State distribution
        visitor: Called as visitor(vector, probability) for each feasible
            vector; in odometer order when single-threaded
        required_targets: Targets a feasible vector must reach
            (defaults to all of T)
        threads: Node-1 partitions (defaults to settings)
        block_size: Vectorized block bound (defaults to settings)

    Returns:
        BatCounters with visited, feasible and elapsed
    """
    required = network.target_mask if required_targets is None else required_targets
    tally, elapsed = _run(
        network, dist, required, FIRST_SOURCE_LABEL, visitor, False, threads, block_size
    )
    return BatCounters(visited=tally.visited, feasible=tally.feasible, elapsed=elapsed)


def reliability_one_to_sink(
    network: AminNetwork,
    dist: StateDistribution,
    target: Optional[int] = None,
    threads: Optional[int] = None,
    block_size: Optional[int] = None,
) -> Tuple[float, BatCounters]:
    """
    R = sum of Pr(X) over feasible state vectors for one target.

    Args:
        target: Target node; defaults to the only member of T

    Returns:
        (reliability, counters)

    Raises:
        UnsupportedNetwork: several targets and none designated
    """
    if target is None:
        if len(network.targets) != 1:
            raise UnsupportedNetwork(
                f"network has {len(network.targets)} targets; designate one"
            )
        (target,) = network.targets

    return reliability_odometer(network, dist, 1 << target, threads, block_size)


def reliability_odometer(
    network: AminNetwork,
    dist: StateDistribution,
    required_targets: Optional[NodeSubset] = None,
    threads: Optional[int] = None,
    block_size: Optional[int] = None,
) -> Tuple[float, BatCounters]:
    """R for a required target set (defaults to all of T)."""
    required = network.target_mask if required_targets is None else required_targets
    logger.info(
        f"BAT: {network.node_count} nodes, {network.arc_count} arcs, "
        f"required {format_subset(required)}"
    )
    tally, elapsed = _run(
        network, dist, required, FIRST_SOURCE_LABEL, None, False, threads, block_size
    )
    reliability = tally.mass.value
    counters = BatCounters(visited=tally.visited, feasible=tally.feasible, elapsed=elapsed)
    logger.info(
        f"BAT: R={reliability:.6f}, visited={counters.visited}, "
        f"feasible={counters.feasible}, {elapsed:.3f}s"
    )
    return reliability, counters


def odometer_target_buckets(
    network: AminNetwork,
    dist: StateDistribution,
    threads: Optional[int] = None,
    block_size: Optional[int] = None,
) -> Tuple[Dict[NodeSubset, float], BatCounters]:
    """
    Bucket every consistent vector's probability by its reached targets.

    Node 1 also takes label 1 (transmits to nobody) here, so the empty
    bucket holds the complete failure mass.
    """
    tally, elapsed = _run(network, dist, 0, 1, None, True, threads, block_size)
    buckets = {key: sums.value for key, sums in sorted(tally.buckets.items())}
    counters = BatCounters(visited=tally.visited, feasible=tally.feasible, elapsed=elapsed)
    return buckets, counters


def visited_formula(network: AminNetwork) -> int:
    """(2^Deg(1) - 1) * prod over the other transmitting nodes of (2^Deg(i) + 1)."""
    total = 1
    for node in transmitting_nodes(network):
        top = 1 << network.degree(node)
        total *= top - 1 if node == SOURCE else top + 1
    return total


def feasible_vectors(
    network: AminNetwork,
    dist: StateDistribution,
    required_targets: Optional[NodeSubset] = None,
) -> List[Tuple[StateVector, float]]:
    """Feasible vectors with their probabilities, in odometer order (small networks)."""
    found: List[Tuple[StateVector, float]] = []
    enumerate_odometer(
        network,
        dist,
        visitor=lambda x, p: found.append((x, p)),
        required_targets=required_targets,
        threads=1,
    )
    return found


__all__ = [
    "BatCounters",
    "FIRST_SOURCE_LABEL",
    "enumerate_odometer",
    "feasible_vectors",
    "odometer",
    "odometer_target_buckets",
    "reliability_odometer",
    "reliability_one_to_sink",
    "visited_formula",
]
