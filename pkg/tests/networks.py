"""Small networks shared by the test modules."""

from pathlib import Path

from amin_rel.model import AminNetwork, StateDistribution, uniform_distribution

FIXTURES = Path(__file__).parent / "fixtures"

# Feasible vectors of the 4-node example, in odometer order
FIG1_FEASIBLE = [
    (2, 3, 0),
    (4, 3, 1),
    (2, 4, 1),
    (4, 4, 1),
    (3, 0, 2),
    (4, 1, 2),
    (2, 2, 2),
    (4, 2, 2),
    (4, 3, 2),
    (2, 4, 2),
    (4, 4, 2),
]
FIG1_RELIABILITY = 15 / 32

# n -> (n_all, visited, feasible, reliability) for uniform semi-complete AMINs
SEMI_COMPLETE = {
    5: (2295, 2025, 388, 0.821289),
    6: (75735, 71145, 11164, 0.884979),
    7: (4922775, 4771305, 667396, 0.928662),
    8: (635037975, 625192425, 81974044, 0.957076),
}


def fig1():
    """V1 = {2, 3}, V2 = {3, 4}, V3 = {4}, T = {4}, uniform."""
    network = AminNetwork.from_arcs(4, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)], [4])
    return network, uniform_distribution(network)


def flex5():
    """V1 = {2, 3}, V2 = {3, 5}, V3 = {4}, T = {4, 5}, uniform."""
    network = AminNetwork.from_arcs(5, [(1, 2), (1, 3), (2, 3), (2, 5), (3, 4)], [4, 5])
    return network, uniform_distribution(network)


def single_arc():
    network = AminNetwork.from_arcs(2, [(1, 2)], [2])
    return network, uniform_distribution(network)


def certain_chain(n: int):
    """1 -> 2 -> ... -> n plus 1 -> n, every node sends to all of V_i."""
    arcs = sorted({(i, i + 1) for i in range(1, n)} | {(1, n)})
    network = AminNetwork.from_arcs(n, arcs, [n])
    tables = {}
    for i in range(1, n):
        size = 1 << network.degree(i)
        tables[i] = tuple([0.0] * (size - 1) + [1.0])
    return network, StateDistribution(tables=tables)
