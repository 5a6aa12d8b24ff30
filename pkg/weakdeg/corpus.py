"""
Named, enumerated and random graph corpora, and the per-graph checks run
over them (`check_corpus_graph`).

All random generation takes an explicit seed.
"""
from dataclasses import dataclass, field
import logging
import random
from typing import List, NamedTuple, Optional, Sequence

import networkx as nx

from .audit import audit_trace, counting_lower_bound, regular_bound_applies, regular_lower_bound
from .engine import WeightMap, verify_certificate
from .graph import Graph, regularity
from .solver import SearchLimits, brute_force_weak_degeneracy, chromatic_number, degeneracy, weak_degeneracy

logger = logging.getLogger(__name__)

CORPUS_KINDS = ("regular", "small", "random")

# tolerance applied to the floating-point side of d - sqrt(2n)
COUNTING_BOUND_TOLERANCE = 1e-9


class CorpusGraph(NamedTuple):
    name: str
    graph: Graph


def cycle(n: int) -> Graph:
    return Graph.from_networkx(nx.cycle_graph(n))


def complete(n: int) -> Graph:
    return Graph.from_networkx(nx.complete_graph(n))


def path(n: int) -> Graph:
    return Graph.from_networkx(nx.path_graph(n))


def star(leaves: int) -> Graph:
    """Center 0 with leaves 1..leaves."""
    return Graph.from_networkx(nx.star_graph(leaves))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_networkx(nx.complete_bipartite_graph(a, b))


def prism(n: int) -> Graph:
    return Graph.from_networkx(nx.circular_ladder_graph(n))


def cube() -> Graph:
    return Graph.from_networkx(nx.hypercube_graph(3))


def petersen() -> Graph:
    return Graph.from_networkx(nx.petersen_graph())


def cycle_complement(n: int) -> Graph:
    return Graph.from_networkx(nx.complement(nx.cycle_graph(n)))


def edgeless(n: int) -> Graph:
    return Graph.from_networkx(nx.empty_graph(n))


def regular_corpus() -> List[CorpusGraph]:
    """Connected regular graphs on at most 10 vertices used for the lower-bound checks."""
    items = [CorpusGraph(f"C{n}", cycle(n)) for n in range(3, 11)]
    items += [CorpusGraph(f"K{n}", complete(n)) for n in (4, 5, 6)]
    items += [
        CorpusGraph("K3,3", complete_bipartite(3, 3)),
        CorpusGraph("prism3", prism(3)),
        CorpusGraph("Q3", cube()),
        CorpusGraph("petersen", petersen()),
        CorpusGraph("K4,4", complete_bipartite(4, 4)),
        CorpusGraph("co-C6", cycle_complement(6)),
    ]
    return items


def small_connected_graphs(max_n: int = 6) -> List[CorpusGraph]:
    """Every connected graph on 1..max_n vertices (max_n <= 7), from the networkx graph atlas."""
    if max_n > 7:
        raise ValueError("the graph atlas only covers graphs on up to 7 vertices")
    items = []
    for index, nxg in enumerate(nx.graph_atlas_g()):
        n = nxg.number_of_nodes()
        if 1 <= n <= max_n and nx.is_connected(nxg):
            items.append(CorpusGraph(f"atlas{index}", Graph.from_networkx(nxg)))
    return items


def random_graphs(count: int, seed: int, sizes: Sequence[int] = (7, 8), p: float = 0.5) -> List[CorpusGraph]:
    rng = random.Random(seed)
    items = []
    for i in range(count):
        n = rng.choice(list(sizes))
        nxg = nx.gnp_random_graph(n, p, seed=rng.randrange(2 ** 32))
        items.append(CorpusGraph(f"random{seed}-{i}", Graph.from_networkx(nxg)))
    return items


def build_corpus(kind: str, count: int = 100, seed: Optional[int] = None) -> List[CorpusGraph]:
    if kind == "regular":
        return regular_corpus()
    if kind == "small":
        return small_connected_graphs()
    if kind == "random":
        if seed is None:
            raise ValueError("random corpora need an explicit seed")
        return random_graphs(count, seed)
    raise ValueError(f"unknown corpus kind {kind!r}, expected one of {CORPUS_KINDS}")


@dataclass
class CorpusRow:
    name: str
    n: int
    m: int
    degree: Optional[int]
    wd: int
    nd: int
    chi: Optional[int] = None
    brute: Optional[int] = None
    regular_bound: Optional[int] = None
    counting_bound: Optional[float] = None
    witness_ok: bool = True
    audit_ok: bool = True
    notes: List[str] = field(default_factory=list)

    def violations(self) -> List[str]:
        found = []
        if not self.witness_ok:
            found.append("witness does not verify")
        if not self.audit_ok:
            found.append("audit identities fail")
        if self.brute is not None and self.brute != self.wd:
            found.append(f"brute force gives {self.brute}")
        if self.wd > self.nd:
            found.append("wd exceeds degeneracy")
        if self.chi is not None and self.chi > self.wd + 1:
            found.append("chromatic number exceeds wd+1")
        if self.regular_bound is not None and self.wd < self.regular_bound:
            found.append("below the regular lower bound")
        if self.counting_bound is not None and self.wd < self.counting_bound - COUNTING_BOUND_TOLERANCE:
            found.append("below the counting lower bound")
        return found

    def to_line(self) -> str:
        def show(value) -> str:
            if value is None:
                return "-"
            if isinstance(value, float):
                return f"{value:.4f}"
            return str(value)

        fields = [
            self.name,
            f"n={self.n}",
            f"m={self.m}",
            f"d={show(self.degree)}",
            f"wd={self.wd}",
            f"nd={self.nd}",
            f"chi={show(self.chi)}",
            f"brute={show(self.brute)}",
            f"lb={show(self.regular_bound)}",
            f"cb={show(self.counting_bound)}",
        ]
        problems = self.violations()
        fields.append("ok" if not problems else "FAIL:" + ";".join(problems))
        return " ".join(fields)


def check_corpus_graph(item: CorpusGraph, limits: Optional[SearchLimits] = None) -> CorpusRow:
    """
    Solve one corpus graph and collect everything the acceptance checks
    compare: wd with its witness and audit, d(G), χ(G), the brute-force
    oracle and the two regular-graph bounds. Oracles over their caps are
    skipped with a log line.
    """
    limits = limits or SearchLimits()
    g = item.graph
    result = weak_degeneracy(g, limits)
    row = CorpusRow(item.name, g.n, g.edge_count, regularity(g), result.value, degeneracy(g).value)

    report = verify_certificate(g, result.witness)
    row.witness_ok = report.ok
    if report.ok:
        row.audit_ok = audit_trace(g, WeightMap.constant(g, result.value), result.witness).ok

    if g.n <= limits.chromatic_vertices:
        row.chi = chromatic_number(g, limits)
    else:
        row.notes.append("chromatic number skipped")
    if g.n <= limits.brute_force_vertices:
        row.brute = brute_force_weak_degeneracy(g, limits)
    else:
        logger.info(f"{item.name}: brute-force oracle skipped, {g.n} vertices exceed the cap of {limits.brute_force_vertices}")
        row.notes.append("oracle skipped")

    if row.degree is not None and regular_bound_applies(row.degree):
        row.regular_bound = regular_lower_bound(row.degree)
        if g.n >= 2:
            row.counting_bound = counting_lower_bound(row.degree, g.n)
    return row
