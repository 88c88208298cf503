"""
Topological relabeling of arbitrary DAGs.

Ingests graphs whose labels are not topological and produces an AminNetwork
with i < j on every arc and the source at label 1.
"""

import logging
from typing import Dict, Hashable, Iterable, List, Optional, Tuple

import networkx as nx

from amin_rel.model.network import AminNetwork

logger = logging.getLogger(__name__)


class RelabelError(ValueError):
    """Cycle found, or no unique source."""

    def __init__(self, message: str, cycle: Optional[List[Tuple[Hashable, Hashable]]] = None):
        super().__init__(message)
        self.cycle = cycle or []


def normalize_labels(
    arcs: Iterable[Tuple[Hashable, Hashable]],
    targets: Iterable[Hashable],
    source: Optional[Hashable] = None,
    nodes: Optional[Iterable[Hashable]] = None,
) -> Tuple[AminNetwork, Dict[Hashable, int]]:
    """
    Relabel a DAG so every arc goes from a lower to a higher label.

    Ties between ready nodes are broken by the string form of the old label,
    so identical input always yields the identical map. An input that is
    already topological (integers 1..n, source 1) maps to itself.

    Args:
        arcs: (u, v) pairs under the old labels
        targets: Old labels of the targets
        source: Old label of the source; when None the unique node with
            in-degree 0 is used
        nodes: Extra isolated nodes to keep

    Returns:
        (relabeled network, old -> new label map)

    Raises:
        RelabelError: directed cycle, or missing/ambiguous source
    """
    graph = nx.DiGraph()
    if nodes is not None:
        graph.add_nodes_from(nodes)
    graph.add_edges_from(arcs)
    targets = list(targets)
    graph.add_nodes_from(targets)

    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        arcs_text = ", ".join(f"{u}->{v}" for u, v, *_ in cycle)
        raise RelabelError(f"directed cycle: {arcs_text}", [(u, v) for u, v, *_ in cycle])

    roots = [v for v in graph.nodes if graph.in_degree(v) == 0]
    if source is None:
        if len(roots) != 1:
            raise RelabelError(
                f"expected exactly one node with in-degree 0, found {len(roots)}: {roots[:5]}"
            )
        source = roots[0]
    elif source not in graph:
        raise RelabelError(f"source {source!r} is not in the graph")
    elif graph.in_degree(source) != 0:
        raise RelabelError(f"source {source!r} has incoming arcs")

    def sort_key(v: Hashable) -> Tuple[int, int, str]:
        # Source first, then integers by value, then everything else by text
        if v == source:
            return (0, 0, "")
        if isinstance(v, int):
            return (1, v, "")
        return (2, 0, str(v))

    order = list(nx.lexicographical_topological_sort(graph, key=sort_key))
    mapping = {old: new for new, old in enumerate(order, start=1)}

    network = AminNetwork.from_arcs(
        len(order),
        [(mapping[u], mapping[v]) for u, v in graph.edges],
        [mapping[t] for t in targets],
    )
    moved = sum(1 for old, new in mapping.items() if old != new)
    logger.info(f"Relabeled {len(order)} nodes ({moved} moved)")
    return network, mapping


def relabel_tables(
    raw: Dict[Hashable, Dict[int, float]],
    old_out: Dict[Hashable, List[Hashable]],
    mapping: Dict[Hashable, int],
) -> Dict[int, Dict[int, float]]:
    """
    Carry per-node bitmask tables across a relabeling.

    A bitmask indexes the ascending out-neighbor list; relabeling can
    reorder that list, so each mask is rewritten member by member.

    Args:
        raw: old node -> {old local bitmask: p}
        old_out: old node -> out-neighbors in old ascending order
        mapping: old -> new labels

    Returns:
        new node -> {new local bitmask: p}
    """
    tables: Dict[int, Dict[int, float]] = {}
    for old_node, table in raw.items():
        if old_node not in mapping:
            continue
        before = old_out.get(old_node, [])
        after = sorted(mapping[v] for v in before)
        position = {label: k for k, label in enumerate(after)}
        new_table = {}
        for mask, p in table.items():
            new_mask = 0
            for k, old_head in enumerate(before):
                if mask & (1 << k):
                    new_mask |= 1 << position[mapping[old_head]]
            new_table[new_mask] = p
        tables[mapping[old_node]] = new_table
    return tables
