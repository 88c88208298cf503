#!/usr/bin/env python3
"""
Test the AMIN data model.

Tests:
1. validate - clean networks and every violation message
2. label codecs - label_to_subset / subset_to_label, Z handling, errors
3. n_all and transmitting nodes, n_all against an enumerated label space
4. network files - fixtures, malformed input, partial prob tables, dump/load
5. normalize_labels - identity, renumbering, cycles, ambiguous sources, bad node names

Usage:
    uv run python tests/test_model.py
"""

import itertools
import json
import os
import tempfile

import pytest

from amin_rel.model import (
    AminNetwork,
    LabelError,
    NetworkFormatError,
    RelabelError,
    StateDistribution,
    describe_state,
    dump_network,
    format_subset,
    label_to_subset,
    load_network,
    n_all,
    normalize_labels,
    parse_network,
    subset_of,
    subset_to_label,
    transmitting_nodes,
    uniform_distribution,
    validate,
)
from amin_rel.model.netfile import parse_relabeled
from amin_rel.workbench import gen_random_amin, gen_semi_complete

from networks import FIXTURES, fig1, flex5


def test_validate_clean_networks():
    """The example networks have no violations."""
    print("\n=== Test 1: validate clean networks ===")

    for build in (fig1, flex5):
        network, dist = build()
        assert validate(network, dist) == []
    network, dist = gen_semi_complete(6)
    assert validate(network, dist) == []

    print("✅ Example networks validate")


def test_validate_reports_violations():
    """Each broken invariant is reported by name."""
    print("\n=== Test 2: validate violations ===")

    backward = AminNetwork.from_arcs(4, [(1, 2), (2, 3), (3, 2), (3, 4)], [4])
    assert "arc from higher to lower label: 3->2" in validate(backward, None)

    loop = AminNetwork.from_arcs(3, [(1, 2), (2, 2), (2, 3)], [3])
    assert "self-loop at node 2" in validate(loop, None)

    dup = AminNetwork.from_arcs(3, [(1, 2), (1, 2), (2, 3)], [3])
    assert "duplicate arc 1->2" in validate(dup, None)

    silent = AminNetwork.from_arcs(3, [(2, 3)], [3])
    assert "node 1 has out-degree 0" in validate(silent, None)

    no_targets = AminNetwork.from_arcs(2, [(1, 2)], [])
    assert "target set is empty" in validate(no_targets, None)

    network, _ = fig1()
    bad = StateDistribution(
        tables={1: (0.25, 0.25, 0.25, 0.3), 2: (0.25,) * 4, 3: (0.5, 0.5)}
    )
    violations = validate(network, bad)
    assert len(violations) == 1
    assert violations[0].startswith("distribution sum != 1 at node 1")

    short = StateDistribution(tables={1: (0.5, 0.5), 2: (0.25,) * 4, 3: (0.5, 0.5)})
    assert any("expected 4" in v for v in validate(network, short))

    print("✅ All violation kinds reported")


def test_label_codecs():
    """Label j >= 1 is the local bitmask j - 1; label 0 is Z."""
    print("\n=== Test 3: label codecs ===")

    network, dist = fig1()
    assert label_to_subset(network, 1, 0) is None
    assert label_to_subset(network, 1, 1) == 0
    assert label_to_subset(network, 1, 2) == subset_of([2])
    assert label_to_subset(network, 1, 3) == subset_of([3])
    assert label_to_subset(network, 1, 4) == subset_of([2, 3])
    assert label_to_subset(network, 2, 3) == subset_of([4])

    for node in transmitting_nodes(network):
        for label in range(1, (1 << network.degree(node)) + 1):
            assert subset_to_label(network, node, label_to_subset(network, node, label)) == label

    with pytest.raises(LabelError):
        label_to_subset(network, 1, 5)
    with pytest.raises(LabelError):
        label_to_subset(network, 3, -1)
    with pytest.raises(LabelError):
        subset_to_label(network, 1, subset_of([4]))

    assert format_subset(None) == "Z"
    assert format_subset(subset_of([2, 3])) == "{2, 3}"
    assert describe_state(network, 1, 4) == "S_{1,4} = {2, 3}"
    assert describe_state(network, 3, 0, dist) == "S_{3,0} = Z  Pr = 1.000000"

    print("✅ Codecs agree with the local bitmask convention")


def test_n_all_and_transmitting_nodes():
    print("\n=== Test 4: n_all ===")

    network, _ = fig1()
    assert transmitting_nodes(network) == (1, 2, 3)
    assert n_all(network) == 5 * 5 * 3

    network, _ = flex5()
    assert transmitting_nodes(network) == (1, 2, 3)
    assert network.sinks() == [4, 5]

    assert n_all(gen_semi_complete(5)[0]) == 2295
    assert n_all(gen_semi_complete(6)[0]) == 75735

    print("✅ n_all matches the closed form")


def _decodable_labels(network, node):
    """Labels of a node found by decoding upward until the codec refuses."""
    labels = []
    label = 0
    while True:
        try:
            label_to_subset(network, node, label)
        except LabelError:
            return labels
        labels.append(label)
        label += 1


def test_n_all_counts_the_label_space():
    """n_all equals the number of vectors in the walked product space."""
    print("\n=== Test 4b: n_all by enumeration ===")

    networks = [fig1()[0], flex5()[0], gen_semi_complete(5)[0], gen_semi_complete(6)[0]]
    networks += [gen_random_amin(n, 0.5, seed)[0] for n in (2, 4, 6) for seed in range(10)]
    for network in networks:
        spaces = [_decodable_labels(network, i) for i in transmitting_nodes(network)]
        counted = sum(1 for _ in itertools.product(*spaces))
        assert counted == n_all(network), network.arcs()

    print(f"✅ {len(networks)} networks enumerated")


def test_load_fixtures():
    """Fixture files load; malformed and missing files raise NetworkFormatError."""
    print("\n=== Test 5: load fixtures ===")

    network, dist = load_network(FIXTURES / "fig1.json")
    assert (network, dist) == fig1()

    network, _ = load_network(FIXTURES / "flex5.json")
    assert network.targets == frozenset({4, 5})

    network, dist = load_network(FIXTURES / "cycle.json")
    assert any("3->2" in v for v in validate(network, dist))

    with pytest.raises(NetworkFormatError):
        load_network(FIXTURES / "malformed.json")
    with pytest.raises(NetworkFormatError):
        load_network(FIXTURES / "does_not_exist.json")
    with pytest.raises(NetworkFormatError):
        parse_network({"nodes": 3})
    with pytest.raises(NetworkFormatError):
        parse_network({"nodes": "3", "arcs": []})
    with pytest.raises(NetworkFormatError):
        parse_network({"nodes": 3, "arcs": [[1, 2, 3]]})
    with pytest.raises(NetworkFormatError):
        parse_network({"nodes": 3, "arcs": [[7, 2]]})

    print("✅ Fixtures load, bad input raises")


def test_partial_probability_tables():
    """Missing nodes are uniform; missing masks of a listed node are 0."""
    print("\n=== Test 6: partial prob tables ===")

    network, dist, raw = parse_network(
        {
            "nodes": 4,
            "arcs": [[1, 2], [1, 3], [2, 3], [2, 4], [3, 4]],
            "prob": {"1": {"1": 0.5, "3": 0.5}},
        }
    )
    assert network.targets == frozenset({4})
    assert raw == {1: {1: 0.5, 3: 0.5}}
    assert dist.tables[1] == (0.0, 0.5, 0.0, 0.5)
    assert dist.tables[2] == (0.25, 0.25, 0.25, 0.25)
    assert dist.tables[3] == (0.5, 0.5)
    assert validate(network, dist) == []

    print("✅ Partial tables filled in")


def test_dump_then_load():
    """A seeded Dirichlet instance survives a write and a read."""
    print("\n=== Test 7: dump and load ===")

    network, dist = gen_random_amin(6, 0.5, seed=7, dirichlet=True)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "net.json")
        dump_network(network, dist, path)
        with open(path, encoding="utf-8") as f:
            text = f.read()
        assert text.endswith("}\n")
        assert set(json.loads(text)) == {"nodes", "arcs", "targets", "prob"}
        assert load_network(path) == (network, dist)

    print("✅ Round trip preserves network and tables")


def test_normalize_labels_identity_and_renumbering():
    print("\n=== Test 8: normalize_labels ===")

    network, _ = fig1()
    relabeled, mapping = normalize_labels(network.arcs(), [4])
    assert mapping == {1: 1, 2: 2, 3: 3, 4: 4}
    assert relabeled == network

    relabeled, mapping = normalize_labels([(3, 1), (1, 2)], [2])
    assert mapping == {3: 1, 1: 2, 2: 3}
    assert relabeled.arcs() == [(1, 2), (2, 3)]
    assert relabeled.targets == frozenset({3})

    relabeled, mapping = normalize_labels(
        [("src", "b"), ("src", "a"), ("a", "t"), ("b", "t")], ["t"]
    )
    assert mapping == {"src": 1, "a": 2, "b": 3, "t": 4}
    assert validate(relabeled, None) == []

    print("✅ Topological renumbering is deterministic")


def test_normalize_labels_errors():
    print("\n=== Test 9: normalize_labels errors ===")

    with pytest.raises(RelabelError) as exc:
        normalize_labels([(1, 2), (2, 3), (3, 2), (3, 4)], [4])
    assert {2, 3} <= {u for u, _ in exc.value.cycle}
    assert "directed cycle" in str(exc.value)

    with pytest.raises(RelabelError):
        normalize_labels([(1, 3), (2, 3)], [3])

    with pytest.raises(RelabelError):
        normalize_labels([(1, 2)], [2], source=2)

    print("✅ Cycles and ambiguous sources rejected")


def test_relabel_moves_probability_tables():
    """Bitmasks follow their out-neighbors when V_i is reordered."""
    print("\n=== Test 10: relabel prob tables ===")

    network, dist = parse_relabeled(
        {
            "arcs": [[1, 4], [1, 2], [4, 2]],
            "targets": [2],
            "prob": {"1": {"0": 0.1, "1": 0.2, "2": 0.3, "3": 0.4}},
        }
    )
    # 1 -> 1, 4 -> 2, 2 -> 3
    assert network.arcs() == [(1, 2), (1, 3), (2, 3)]
    assert network.targets == frozenset({3})
    assert dist.tables[1] == (0.1, 0.3, 0.2, 0.4)
    assert dist.tables[2] == (0.5, 0.5)

    print("✅ Tables remapped")


def test_relabel_rejects_bad_node_names():
    """Node names must be strings or integers when relabeling."""
    print("\n=== Test 11: relabel node names ===")

    with pytest.raises(NetworkFormatError):
        load_network(FIXTURES / "bad_endpoint.json", relabel=True)
    for doc in (
        {"arcs": [[True, 2]], "targets": [2]},
        {"arcs": [[1, {"x": 1}]], "targets": [2]},
        {"arcs": [[1, 2]], "targets": [[2]]},
        {"arcs": [[1, 2]], "targets": [2], "source": [1]},
        {"arcs": "1->2", "targets": [2]},
    ):
        with pytest.raises(NetworkFormatError):
            parse_relabeled(doc)

    network, _ = parse_relabeled({"arcs": [["s", 5], [5, "t"]], "targets": ["t"]})
    assert network.arcs() == [(1, 2), (2, 3)]

    print("✅ Unhashable and boolean names refused")


if __name__ == "__main__":
    print("=" * 60)
    print("Testing AMIN model")
    print("=" * 60)

    tests = [
        test_validate_clean_networks,
        test_validate_reports_violations,
        test_label_codecs,
        test_n_all_and_transmitting_nodes,
        test_n_all_counts_the_label_space,
        test_load_fixtures,
        test_partial_probability_tables,
        test_dump_then_load,
        test_normalize_labels_identity_and_renumbering,
        test_normalize_labels_errors,
        test_relabel_moves_probability_tables,
        test_relabel_rejects_bad_node_names,
    ]

    passed = 0
    failed = 0

    for test in tests:
        try:
            test()
            passed += 1
        except Exception as e:
            print(f"❌ Test failed with exception: {e}")
            import traceback

            traceback.print_exc()
            failed += 1

    print("=" * 60)
    print(f"Results: {passed} passed, {failed} failed")
    print("=" * 60)
