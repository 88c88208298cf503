"""
Network file format (JSON, UTF-8).

    {"nodes": n, "arcs": [[i, j], ...], "targets": [t, ...],
     "prob": {"i": {"<local bitmask as decimal>": p, ...}, ...}}

Omitted "prob" means uniform. Nodes missing from "prob" get the uniform
table; bitmasks missing inside a listed node get probability 0.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from amin_rel.model.network import (
    AminNetwork,
    StateDistribution,
    transmitting_nodes,
)
from amin_rel.model.relabel import normalize_labels, relabel_tables

logger = logging.getLogger(__name__)


class NetworkFormatError(ValueError):
    """Unreadable or malformed network file."""

    pass


def _as_int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise NetworkFormatError(f"{what} must be an integer, got {value!r}")
    return value


def _as_name(value: Any, what: str) -> Union[int, str]:
    """Node names in relabeled files are strings or integers."""
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise NetworkFormatError(f"{what} must be a string or integer, got {value!r}")
    return value


def parse_network(
    data: Dict[str, Any]
) -> Tuple[AminNetwork, StateDistribution, Dict[int, Dict[int, float]]]:
    """
    Turn a decoded JSON document into a network and distribution.

    Returns:
        (network, distribution, raw per-node bitmask tables as given)

    Raises:
        NetworkFormatError: missing keys or wrong types
    """
    if not isinstance(data, dict):
        raise NetworkFormatError("network file must hold a JSON object")
    for key in ("nodes", "arcs"):
        if key not in data:
            raise NetworkFormatError(f"missing key '{key}'")

    n = _as_int(data["nodes"], "nodes")
    if not isinstance(data["arcs"], list):
        raise NetworkFormatError("'arcs' must be a list of [i, j] pairs")

    arcs = []
    for arc in data["arcs"]:
        if not isinstance(arc, (list, tuple)) or len(arc) != 2:
            raise NetworkFormatError(f"bad arc {arc!r}, expected [i, j]")
        tail = _as_int(arc[0], "arc tail")
        if tail < 1 or tail > n:
            raise NetworkFormatError(f"arc {arc!r} starts outside 1..{n}")
        arcs.append((tail, _as_int(arc[1], "arc head")))

    targets = data.get("targets", [n])
    if not isinstance(targets, list):
        raise NetworkFormatError("'targets' must be a list")
    targets = [_as_int(t, "target") for t in targets]

    network = AminNetwork.from_arcs(n, arcs, targets)

    raw: Dict[int, Dict[int, float]] = {}
    prob = data.get("prob")
    if prob is not None:
        if not isinstance(prob, dict):
            raise NetworkFormatError("'prob' must be an object keyed by node")
        for node_key, table in prob.items():
            try:
                node = int(node_key)
                if not isinstance(table, dict):
                    raise TypeError(f"table for node {node_key} is not an object")
                raw[node] = {int(m): float(p) for m, p in table.items()}
            except (TypeError, ValueError) as e:
                raise NetworkFormatError(f"bad probability table for node {node_key}: {e}")

    return network, build_distribution(network, raw if prob is not None else None), raw


def build_distribution(
    network: AminNetwork, raw: Optional[Dict[int, Dict[int, float]]]
) -> StateDistribution:
    """Dense tables from sparse per-node bitmask tables (None = uniform)."""
    tables = {}
    for i in transmitting_nodes(network):
        size = 1 << network.degree(i)
        given = (raw or {}).get(i)
        if given is None:
            tables[i] = tuple([1.0 / size] * size)
        else:
            # Out-of-range masks are kept out of the dense table; validate()
            # then sees the missing mass as a bad sum.
            tables[i] = tuple(given.get(m, 0.0) for m in range(size))
    return StateDistribution(tables=tables)


def parse_relabeled(data: Dict[str, Any]) -> Tuple[AminNetwork, StateDistribution]:
    """
    Like parse_network, but the arc labels need not be topological.

    The optional "source" key names the source; otherwise the unique node
    with in-degree 0 is used. Probability tables follow their nodes.

    Raises:
        NetworkFormatError: malformed document
        RelabelError: cycle or no unique source
    """
    if not isinstance(data, dict) or "arcs" not in data:
        raise NetworkFormatError("missing key 'arcs'")
    if not isinstance(data["arcs"], list):
        raise NetworkFormatError("'arcs' must be a list of [u, v] pairs")
    arcs = []
    for arc in data["arcs"]:
        if not isinstance(arc, (list, tuple)) or len(arc) != 2:
            raise NetworkFormatError(f"bad arc {arc!r}, expected [u, v]")
        arcs.append((_as_name(arc[0], "arc tail"), _as_name(arc[1], "arc head")))

    old_out: Dict[Any, List[Any]] = {}
    for u, v in arcs:
        old_out.setdefault(u, []).append(v)
    for u in old_out:
        old_out[u].sort(key=lambda x: (str(type(x)), x))

    targets = data.get("targets")
    if not isinstance(targets, list) or not targets:
        raise NetworkFormatError("'targets' must be a non-empty list when relabeling")
    targets = [_as_name(t, "target") for t in targets]
    source = data.get("source")
    if source is not None:
        source = _as_name(source, "source")

    network, mapping = normalize_labels(arcs, targets, source=source)

    raw = None
    if data.get("prob") is not None:
        try:
            by_old = {}
            for node_key, table in data["prob"].items():
                old = int(node_key) if str(node_key).lstrip("-").isdigit() else node_key
                by_old[old] = {int(m): float(p) for m, p in table.items()}
        except (AttributeError, TypeError, ValueError) as e:
            raise NetworkFormatError(f"bad probability table: {e}")
        raw = relabel_tables(by_old, old_out, mapping)

    return network, build_distribution(network, raw)


def load_network(
    path: Union[str, Path], relabel: bool = False
) -> Tuple[AminNetwork, StateDistribution]:
    """
    Read a network file.

    Args:
        path: JSON file
        relabel: Accept non-topological labels and renumber them

    Raises:
        NetworkFormatError: unreadable file, bad JSON or bad structure
        RelabelError: (relabel only) cycle or no unique source
    """
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise NetworkFormatError(f"{path}: invalid JSON ({e})")
    except OSError as e:
        raise NetworkFormatError(f"{path}: {e}")

    if relabel:
        network, dist = parse_relabeled(data)
    else:
        network, dist, _ = parse_network(data)
    logger.debug(
        f"Loaded {path}: {network.node_count} nodes, {network.arc_count} arcs"
    )
    return network, dist


def network_document(
    network: AminNetwork, dist: Optional[StateDistribution] = None
) -> Dict[str, Any]:
    """JSON-ready document for a network (prob written only when given)."""
    doc: Dict[str, Any] = {
        "nodes": network.node_count,
        "arcs": [[i, j] for i, j in network.arcs()],
        "targets": sorted(network.targets),
    }
    if dist is not None:
        doc["prob"] = {
            str(i): {str(m): p for m, p in enumerate(table)}
            for i, table in sorted(dist.tables.items())
        }
    return doc


def dump_network(
    network: AminNetwork,
    dist: Optional[StateDistribution],
    path: Union[str, Path],
) -> None:
    """Write a network file (stable key order, trailing newline)."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(network_document(network, dist), f, indent=2)
        f.write("\n")
    logger.info(f"Wrote network to {path}")
