"""AMIN data model: networks, distributions, label codecs, file format"""

from amin_rel.model.network import (
    PROB_SUM_TOLERANCE,
    Z_LABEL,
    AminNetwork,
    LabelError,
    NodeSubset,
    StateDistribution,
    UnsupportedNetwork,
    describe_state,
    format_subset,
    label_count,
    label_to_subset,
    local_to_global,
    members,
    n_all,
    subset_of,
    subset_table,
    subset_to_label,
    transmitting_nodes,
    uniform_distribution,
    validate,
)
from amin_rel.model.netfile import (
    NetworkFormatError,
    build_distribution,
    dump_network,
    load_network,
    network_document,
    parse_network,
)
from amin_rel.model.relabel import RelabelError, normalize_labels, relabel_tables

__all__ = [
    "PROB_SUM_TOLERANCE",
    "Z_LABEL",
    "AminNetwork",
    "LabelError",
    "NetworkFormatError",
    "NodeSubset",
    "RelabelError",
    "StateDistribution",
    "UnsupportedNetwork",
    "build_distribution",
    "describe_state",
    "dump_network",
    "format_subset",
    "label_count",
    "label_to_subset",
    "load_network",
    "local_to_global",
    "members",
    "n_all",
    "network_document",
    "normalize_labels",
    "parse_network",
    "relabel_tables",
    "subset_of",
    "subset_table",
    "subset_to_label",
    "transmitting_nodes",
    "uniform_distribution",
    "validate",
]
