"""
AMIN data model: network, state distribution, state-label codecs.

Node labels run 1..n with node 1 the source. Node subsets are int bitmasks
over global labels (bit k <=> node k, bit 0 unused). Out-neighbor lists are
kept ascending; state label j >= 1 of node i is the subset whose local
bitmask is j - 1 over that list, and label 0 is the Z state.
"""

import math
import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

logger = logging.getLogger(__name__)

# Per-node probability sums must hit 1 within this tolerance
PROB_SUM_TOLERANCE = 1e-9

# Z state ("never received information"): label 0, probability 1
Z_LABEL = 0

NodeSubset = int


class LabelError(ValueError):
    """Out-of-range state label, or a subset outside V_i."""

    pass


class UnsupportedNetwork(ValueError):
    """An engine precondition does not hold for this network."""

    pass


# ============================================================================
# Node subsets
# ============================================================================


def subset_of(nodes: Iterable[int]) -> NodeSubset:
    """Bitmask holding the given node labels."""
    mask = 0
    for node in nodes:
        mask |= 1 << node
    return mask


def members(mask: NodeSubset) -> List[int]:
    """Ascending node labels held by a bitmask."""
    out = []
    node = 0
    while mask:
        if mask & 1:
            out.append(node)
        mask >>= 1
        node += 1
    return out


def format_subset(mask: Optional[NodeSubset]) -> str:
    """Render a subset as {2, 3}; None renders as Z."""
    if mask is None:
        return "Z"
    return "{" + ", ".join(str(n) for n in members(mask)) + "}"


# ============================================================================
# Domain types
# ============================================================================


class AminNetwork(BaseModel):
    """
    An acyclic multistate information network G(V, E) with targets T.

    adjacency[i - 1] is V_i, the out-neighbors of node i. Construction only
    checks shapes; semantic invariants are reported by validate().
    """

    model_config = ConfigDict(frozen=True)

    node_count: int
    adjacency: Tuple[Tuple[int, ...], ...]
    targets: FrozenSet[int]

    @classmethod
    def from_arcs(
        cls,
        node_count: int,
        arcs: Iterable[Tuple[int, int]],
        targets: Optional[Iterable[int]] = None,
    ) -> "AminNetwork":
        """
        Build a network from an arc list.

        Args:
            node_count: Number of nodes n (labels 1..n)
            arcs: (i, j) pairs; each V_i is sorted ascending
            targets: Target labels (defaults to {n})
        """
        out: Dict[int, List[int]] = {i: [] for i in range(1, node_count + 1)}
        for i, j in arcs:
            out.setdefault(i, []).append(j)
        adjacency = tuple(
            tuple(sorted(out.get(i, []))) for i in range(1, node_count + 1)
        )
        return cls(
            node_count=node_count,
            adjacency=adjacency,
            targets=frozenset(targets) if targets is not None else {node_count},
        )

    def out(self, node: int) -> Tuple[int, ...]:
        """V_node, ascending."""
        return self.adjacency[node - 1]

    def degree(self, node: int) -> int:
        """Deg(node), the out-degree."""
        return len(self.adjacency[node - 1])

    def arcs(self) -> List[Tuple[int, int]]:
        """All arcs (i, j) in adjacency order."""
        return [
            (i, j)
            for i in range(1, self.node_count + 1)
            for j in self.adjacency[i - 1]
        ]

    @property
    def arc_count(self) -> int:
        return sum(len(v) for v in self.adjacency)

    @property
    def target_mask(self) -> NodeSubset:
        return subset_of(self.targets)

    def sinks(self) -> List[int]:
        return [i for i in range(1, self.node_count + 1) if not self.adjacency[i - 1]]


class StateDistribution(BaseModel):
    """
    Per-node state probabilities p_{i,I}.

    tables[i][m] is the probability that node i, once it has received the
    information, transmits to the subset with local bitmask m over V_i.
    Only nodes with Deg(i) >= 1 carry a table.
    """

    model_config = ConfigDict(frozen=True)

    tables: Dict[int, Tuple[float, ...]]

    def p(self, node: int, local_mask: int) -> float:
        return self.tables[node][local_mask]

    def label_probability(self, node: int, label: int) -> float:
        """Pr(S_{node,label}); the Z label carries probability 1."""
        if label == Z_LABEL:
            return 1.0
        return self.tables[node][label - 1]


def transmitting_nodes(network: AminNetwork) -> Tuple[int, ...]:
    """Ascending labels with Deg >= 1; the coordinate order of a StateVector."""
    return tuple(
        i for i in range(1, network.node_count + 1) if network.adjacency[i - 1]
    )


def uniform_distribution(network: AminNetwork) -> StateDistribution:
    """p_{i,I} = 1 / 2^Deg(i) for every node with out-arcs."""
    tables = {}
    for i in transmitting_nodes(network):
        size = 1 << network.degree(i)
        tables[i] = tuple([1.0 / size] * size)
    return StateDistribution(tables=tables)


# ============================================================================
# Validation
# ============================================================================


def validate(network: AminNetwork, dist: Optional[StateDistribution]) -> List[str]:
    """
    Report every invariant violation of a network and its distribution.

    Returns:
        Violation messages, empty when valid
    """
    violations: List[str] = []
    n = network.node_count

    if n < 1:
        return [f"node count must be positive, got {n}"]
    if len(network.adjacency) != n:
        violations.append(
            f"adjacency has {len(network.adjacency)} lists for {n} nodes"
        )
        return violations

    for i in range(1, n + 1):
        v_i = network.adjacency[i - 1]
        for j in v_i:
            if j < 1 or j > n:
                violations.append(f"arc {i}->{j} points outside 1..{n}")
            elif j == i:
                violations.append(f"self-loop at node {i}")
            elif j < i:
                violations.append(f"arc from higher to lower label: {i}->{j}")
        for a, b in zip(v_i, v_i[1:]):
            if a == b:
                violations.append(f"duplicate arc {i}->{a}")
            elif a > b:
                violations.append(f"V_{i} not ascending: {a} before {b}")

    if not network.adjacency[0]:
        violations.append("node 1 has out-degree 0")

    if not network.targets:
        violations.append("target set is empty")
    for t in sorted(network.targets):
        if t < 1 or t > n:
            violations.append(f"target {t} outside 1..{n}")

    if dist is None:
        return violations

    for i in range(1, n + 1):
        deg = len(network.adjacency[i - 1])
        if deg == 0:
            continue
        table = dist.tables.get(i)
        if table is None:
            violations.append(f"node {i} has no distribution")
            continue
        if len(table) != 1 << deg:
            violations.append(
                f"node {i} distribution has {len(table)} entries, expected {1 << deg}"
            )
            continue
        for m, p in enumerate(table):
            if not (0.0 <= p <= 1.0):
                violations.append(f"node {i} probability for mask {m} is {p}, not in [0, 1]")
        total = math.fsum(table)
        if abs(total - 1.0) > PROB_SUM_TOLERANCE:
            violations.append(f"distribution sum != 1 at node {i}: {total!r}")

    return violations


# ============================================================================
# State label codecs
# ============================================================================


def label_count(network: AminNetwork, node: int) -> int:
    """Largest label of a node, 2^Deg(node)."""
    return 1 << network.degree(node)


def local_to_global(v_i: Tuple[int, ...], local_mask: int) -> NodeSubset:
    """Map a bitmask over V_i (bit k <=> (k+1)-th smallest) to global labels."""
    mask = 0
    k = 0
    while local_mask:
        if local_mask & 1:
            mask |= 1 << v_i[k]
        local_mask >>= 1
        k += 1
    return mask


def label_to_subset(
    network: AminNetwork, node: int, label: int
) -> Optional[NodeSubset]:
    """
    Decode a state label of a node.

    Returns:
        None for the Z label (0), otherwise the global subset for label j,
        i.e. bitmask j - 1 over ascending V_node

    Raises:
        LabelError: label outside 0..2^Deg(node)
    """
    top = label_count(network, node)
    if label < 0 or label > top:
        raise LabelError(f"label {label} outside 0..{top} for node {node}")
    if label == Z_LABEL:
        return None
    return local_to_global(network.out(node), label - 1)


def subset_to_label(network: AminNetwork, node: int, subset: NodeSubset) -> int:
    """
    Encode a transmitted subset as a state label (>= 1).

    Raises:
        LabelError: subset holds nodes outside V_node
    """
    v_i = network.out(node)
    local = 0
    rest = subset
    for k, j in enumerate(v_i):
        if subset & (1 << j):
            local |= 1 << k
            rest &= ~(1 << j)
    if rest:
        raise LabelError(
            f"subset {format_subset(subset)} not contained in V_{node} = {format_subset(subset_of(v_i))}"
        )
    return local + 1


def subset_table(network: AminNetwork, node: int) -> List[NodeSubset]:
    """Global subset for every label 0..2^Deg(node); Z decodes to 0."""
    v_i = network.out(node)
    return [0] + [local_to_global(v_i, m) for m in range(1 << len(v_i))]


def describe_state(
    network: AminNetwork, node: int, label: int, dist: Optional[StateDistribution] = None
) -> str:
    """One Table-1 style line: S_{i,j} = {...} with its probability."""
    subset = label_to_subset(network, node, label)
    text = f"S_{{{node},{label}}} = {format_subset(subset)}"
    if dist is not None:
        text += f"  Pr = {dist.label_probability(node, label):.6f}"
    return text


def n_all(network: AminNetwork) -> int:
    """Size of the full state-label space: prod over Deg(i) >= 1 of (2^Deg(i) + 1)."""
    total = 1
    for i in transmitting_nodes(network):
        total *= (1 << network.degree(i)) + 1
    return total
