"""
Universal generating function method (UGFM) for AMIN reliability.

A subnet UGF maps an exponent J (the nodes that hold the information but
have not transmitted yet) to the probability mass of reaching that
situation. Nodes are composed in ascending order: a term whose exponent
contains node i is expanded over every state I of node i into exponent
(J | I) - {i}; other terms pass through. Empty exponents mean the spread
died and are dropped, their mass kept as the failure mass.

Like exponents merge numerically, but each term also counts the
unsimplified products folded into it. A symbolic UGFM has to store all of
those monomials, and that count is what the storage cap bounds.
"""

import time
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, Optional, Tuple

from pydantic import BaseModel

from amin_rel.config import get_settings
from amin_rel.model import (
    AminNetwork,
    NodeSubset,
    StateDistribution,
    UnsupportedNetwork,
    format_subset,
    members,
    subset_table,
    transmitting_nodes,
)
from amin_rel.spread import SOURCE

logger = logging.getLogger(__name__)


class TermCapExceeded(RuntimeError):
    """Live monomials after composing a node exceed the storage cap."""

    def __init__(self, node: int, live: int, cap: int, generated: int):
        super().__init__(
            f"UGFM storage cap exceeded at node {node}: {live} live monomials > cap {cap} "
            f"({generated} generated)"
        )
        self.node = node
        self.live = live
        self.cap = cap
        self.generated = generated


@dataclass
class UgfTerm:
    """
    One merged term. Exponents of a subnet UGF are never empty; only a
    node UGF u(i) with i > 1 carries exponent 0 for its silent state.
    """

    exponent: NodeSubset
    coefficient: float
    products: int = 1


@dataclass
class UgfPolynomial:
    """Merged terms keyed by exponent, plus running counters."""

    terms: Dict[NodeSubset, UgfTerm] = field(default_factory=dict)
    generated: int = 0
    pruned_mass: float = 0.0
    cap: Optional[int] = None

    @property
    def live_terms(self) -> int:
        return len(self.terms)

    @property
    def live_monomials(self) -> int:
        return sum(t.products for t in self.terms.values())

    def coefficient(self, exponent: NodeSubset) -> float:
        term = self.terms.get(exponent)
        return term.coefficient if term else 0.0

    def add(self, exponent: NodeSubset, coefficient: float, products: int) -> None:
        term = self.terms.get(exponent)
        if term is None:
            self.terms[exponent] = UgfTerm(exponent, coefficient, products)
        else:
            term.coefficient += coefficient
            term.products += products

    def describe(self) -> str:
        """Terms as 0.4375 z^{3} [4] + ..., ordered by exponent."""
        return " + ".join(
            f"{t.coefficient:.6g} z^{format_subset(t.exponent)} [{t.products}]"
            for _, t in sorted(self.terms.items())
        )


class UgfmStats(BaseModel):
    generated: int = 0
    peak_terms: int = 0
    peak_monomials: int = 0
    pruned_mass: float = 0.0
    elapsed: float = 0.0


def node_ugf(network: AminNetwork, dist: StateDistribution, i: int) -> UgfPolynomial:
    """
    u(i): one term per subset J of V_i with coefficient p_{i,J}.

    Node 1 drops J = {} (its mass goes straight to the failure mass);
    other nodes keep it as exponent 0, the "received but silent" state.
    Only u(1) seeds the recursion. The u(i) for i > 1 are for display
    and `compose` reads the node tables itself, so no subnet UGF ever
    holds an empty exponent.
    """
    subsets = subset_table(network, i)
    poly = UgfPolynomial()
    for m, p in enumerate(dist.tables[i]):
        exponent = subsets[m + 1]
        if i == SOURCE and not exponent:
            poly.pruned_mass += p
            continue
        poly.add(exponent, p, 1)
        poly.generated += 1
    return poly


def compose(
    poly: UgfPolynomial,
    network: AminNetwork,
    dist: StateDistribution,
    i: int,
    cap: Optional[int] = None,
) -> UgfPolynomial:
    """
    Fold node i into a subnet UGF.

    Raises:
        TermCapExceeded: live monomials of the result exceed the cap
    """
    cap = cap if cap is not None else poly.cap
    bit = 1 << i
    subsets = subset_table(network, i)
    table = dist.tables[i]

    out = UgfPolynomial(generated=poly.generated, pruned_mass=poly.pruned_mass, cap=cap)
    for exponent, term in poly.terms.items():
        if not exponent & bit:
            out.add(exponent, term.coefficient, term.products)
            continue
        base = exponent & ~bit
        for m, p in enumerate(table):
            merged = base | subsets[m + 1]
            out.generated += term.products
            if not merged:
                out.pruned_mass += term.coefficient * p
                continue
            out.add(merged, term.coefficient * p, term.products)

    live = out.live_monomials
    logger.debug(
        f"Composed node {i}: {out.live_terms} terms, {live} monomials, "
        f"{out.generated} generated"
    )
    if cap is not None and live > cap:
        logger.warning(f"UGFM cap {cap} exceeded at node {i} ({live} monomials)")
        raise TermCapExceeded(i, live, cap, out.generated)
    return out


def _check_targets(network: AminNetwork) -> None:
    sinks = set(network.sinks())
    bad = sorted(t for t in network.targets if t not in sinks)
    if bad:
        raise UnsupportedNetwork(f"UGFM needs sink targets; {bad} transmit")


def subnet_ugfs(
    network: AminNetwork,
    dist: StateDistribution,
    cap: Optional[int] = None,
) -> Iterator[Tuple[int, UgfPolynomial]]:
    """Yield (i, U(i)): U(1) = u(1), then one step per transmitting node."""
    _check_targets(network)
    cap = cap if cap is not None else get_settings().ugfm_cap
    nodes = transmitting_nodes(network)
    if not nodes or nodes[0] != SOURCE:
        raise UnsupportedNetwork("node 1 must transmit (out-degree >= 1)")

    poly = node_ugf(network, dist, SOURCE)
    poly.cap = cap
    yield SOURCE, poly
    for i in nodes[1:]:
        poly = compose(poly, network, dist, i, cap)
        yield i, poly


def _run(
    network: AminNetwork, dist: StateDistribution, cap: Optional[int]
) -> Tuple[UgfPolynomial, UgfmStats]:
    stats = UgfmStats()
    start = time.perf_counter()
    poly = UgfPolynomial()
    for _, poly in subnet_ugfs(network, dist, cap):
        stats.peak_terms = max(stats.peak_terms, poly.live_terms)
        stats.peak_monomials = max(stats.peak_monomials, poly.live_monomials)
    stats.generated = poly.generated
    stats.pruned_mass = poly.pruned_mass
    stats.elapsed = time.perf_counter() - start
    return poly, stats


def reliability_ugfm(
    network: AminNetwork,
    dist: StateDistribution,
    targets: Optional[NodeSubset] = None,
    cap: Optional[int] = None,
) -> Tuple[float, UgfmStats]:
    """
    R: total coefficient of final terms whose exponent holds the required targets.

    Args:
        targets: Required targets (defaults to all of T)
        cap: Live monomial cap (defaults to settings)

    Raises:
        TermCapExceeded: storage burst, with the node where it happened
        UnsupportedNetwork: a target transmits
    """
    required = network.target_mask if targets is None else targets
    logger.info(f"UGFM: {network.node_count} nodes, {network.arc_count} arcs")
    poly, stats = _run(network, dist, cap)
    reliability = sum(
        t.coefficient for e, t in sorted(poly.terms.items()) if not required & ~e
    )
    logger.info(
        f"UGFM: R={reliability:.6f}, generated={stats.generated}, "
        f"peak={stats.peak_monomials} monomials, {stats.elapsed:.3f}s"
    )
    return reliability, stats


def ugfm_target_buckets(
    network: AminNetwork,
    dist: StateDistribution,
    cap: Optional[int] = None,
) -> Tuple[Dict[FrozenSet[int], float], UgfmStats]:
    """Final mass per reached-target set; the empty set also takes the pruned mass."""
    poly, stats = _run(network, dist, cap)
    target_mask = network.target_mask
    buckets: Dict[NodeSubset, float] = {0: poly.pruned_mass}
    for exponent, term in sorted(poly.terms.items()):
        key = exponent & target_mask
        buckets[key] = buckets.get(key, 0.0) + term.coefficient
    return {frozenset(members(k)): v for k, v in sorted(buckets.items())}, stats


__all__ = [
    "TermCapExceeded",
    "UgfPolynomial",
    "UgfTerm",
    "UgfmStats",
    "compose",
    "node_ugf",
    "reliability_ugfm",
    "subnet_ugfs",
    "ugfm_target_buckets",
]
