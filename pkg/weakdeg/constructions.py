"""
Regular graphs of low weak degeneracy, together with deletion certificates
that prove it.

Odd degree 2k+1 (`build_odd`): three index rows A, B, C of length
s = 6k^3 + 6k^2 + 2k with

    a_i ~ a_j  iff  |i - j| in [1, k-1]
    b_i ~ b_j  iff  |i - j| in [1, k]
    c_i ~ c_j  iff  |i - j| in [1, k]
    a_i ~ b_i,  a_i ~ c_i

The boundary vertices (index i outside [k+1, s-k]) fall short of degree
2k+1 and are topped up with 3k(k+1) fresh pendant vertices; every interior
a_i then gets one extra edge to a pendant through the map phi, each
pendant receiving exactly 2k of them. The result is (2k+1)-regular and is
weakly (k+1)-degenerate (`odd_strategy`).

Even degree (`lift`): d+1 copies of a d-regular graph plus one common
neighbor per original vertex is (d+1)-regular, and costs one more unit of
budget (`lift_strategy`).

Id layout for the odd construction: a_i -> i-1, b_i -> s+i-1,
c_i -> 2s+i-1, pendant p_j -> 3s+j-1. For a lift of a graph on n ids,
vertex v of layer i gets id i*n + v; layer 0 holds the common neighbors.
"""
from dataclasses import dataclass, field
import logging
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .audit import regular_lower_bound
from .engine import (
    Del,
    DelSave,
    State,
    Step,
    Trace,
    WeightMap,
    apply_step,
    legal_delsave,
    verify_certificate,
)
from .graph import Graph, GraphError, Label, LabeledGraph, WeakDegError, make_graph, regularity

logger = logging.getLogger(__name__)


class ConstructionError(WeakDegError):
    """Invalid construction parameters, or a generated object failing its own check."""


def index_range(k: int) -> int:
    """s = 6k^3 + 6k^2 + 2k."""
    return 6 * k ** 3 + 6 * k ** 2 + 2 * k


def pendant_count(k: int) -> int:
    """|V2| = 3k(k+1)."""
    return 3 * k * (k + 1)


@dataclass(frozen=True)
class OddConstruction:
    k: int
    s: int
    lg: LabeledGraph
    phi: Dict[int, int] = field(compare=False)

    @property
    def graph(self) -> Graph:
        return self.lg.graph

    @property
    def degree(self) -> int:
        return 2 * self.k + 1

    def a(self, i: int) -> int:
        return i - 1

    def b(self, i: int) -> int:
        return self.s + i - 1

    def c(self, i: int) -> int:
        return 2 * self.s + i - 1

    def p(self, j: int) -> int:
        return 3 * self.s + j - 1

    def is_interior(self, i: int) -> bool:
        return self.k + 1 <= i <= self.s - self.k

    def boundary(self) -> List[int]:
        """The set D in its canonical order: A left, A right, B left, B right, C left, C right."""
        left = range(1, self.k + 1)
        right = range(self.s - self.k + 1, self.s + 1)
        return [row(i) for row in (self.a, self.b, self.c) for side in (left, right) for i in side]

    def pendants(self) -> List[int]:
        return list(range(3 * self.s, 3 * self.s + pendant_count(self.k)))


def build_odd(k: int) -> OddConstruction:
    """The (2k+1)-regular graph with weak degeneracy k+1, for k >= 1."""
    if k < 1:
        raise ConstructionError(f"odd construction needs k >= 1, got {k} (k=0 gives s=0, violating s > 2k)")
    s = index_range(k)
    pendants = pendant_count(k)
    n = 3 * s + pendants
    a = lambda i: i - 1
    b = lambda i: s + i - 1
    c = lambda i: 2 * s + i - 1

    edges = []
    for i in range(1, s + 1):
        for j in range(i + 1, min(s, i + k) + 1):
            if j - i <= k - 1:
                edges.append((a(i), a(j)))
            edges.append((b(i), b(j)))
            edges.append((c(i), c(j)))
        edges.append((a(i), b(i)))
        edges.append((a(i), c(i)))
    core = make_graph(n, edges)

    labels: List[Label] = [Label("a", i) for i in range(1, s + 1)]
    labels += [Label("b", i) for i in range(1, s + 1)]
    labels += [Label("c", i) for i in range(1, s + 1)]
    labels += [Label("p", j) for j in range(1, pendants + 1)]

    oc = OddConstruction(k, s, LabeledGraph(core, tuple(labels)), {})
    target = 2 * k + 1
    next_pendant = 3 * s
    for v in oc.boundary():
        for _ in range(target - core.degree(v)):
            edges.append((v, next_pendant))
            next_pendant += 1
    if next_pendant != n:
        raise ConstructionError(f"boundary used {next_pendant - 3 * s} pendants, expected {pendants}")

    phi: Dict[int, int] = {}
    interior = list(range(k + 1, s - k + 1))
    for offset, i in enumerate(interior):
        p = 3 * s + offset // (2 * k)
        phi[a(i)] = p
        edges.append((a(i), p))

    graph = make_graph(n, edges)
    if regularity(graph) != target:
        raise ConstructionError(f"odd construction for k={k} is not {target}-regular")
    logger.info(f"built odd construction k={k}: s={s}, |V2|={pendants}, n={n}")
    return OddConstruction(k, s, LabeledGraph(graph, tuple(labels)), phi)


@dataclass
class StrategyLog:
    """What the odd strategy saw while it was generated."""

    interior_budgets: Dict[int, int] = field(default_factory=dict)
    saves_used: Dict[int, bool] = field(default_factory=dict)
    min_v1_budget: Optional[int] = None
    pendant_budgets: Dict[int, int] = field(default_factory=dict)


def run_odd_strategy(oc: OddConstruction) -> Tuple[Trace, StrategyLog]:
    """
    Delete a_1, b_1, c_1, a_2, ..., c_s and then the pendants, from constant
    budget k+1. An interior a_i is deleted with DelSave(a_i, phi(a_i))
    whenever that is legal, and with Del otherwise; all other vertices use
    Del.
    """
    graph = oc.graph
    st = State.initial(graph, WeightMap.constant(graph, oc.k + 1))
    log = StrategyLog()
    steps: List[Step] = []

    def delete(step: Step):
        nonlocal st
        st = apply_step(st, step)
        steps.append(step)

    for i in range(1, oc.s + 1):
        for v in (oc.a(i), oc.b(i), oc.c(i)):
            budget = st.f[v]
            log.min_v1_budget = budget if log.min_v1_budget is None else min(log.min_v1_budget, budget)
            if v == oc.a(i) and oc.is_interior(i):
                target = oc.phi[v]
                log.interior_budgets[v] = budget
                use_save = legal_delsave(st, v, target)
                if use_save != (budget == 2 and st.f[target] <= 1):
                    raise ConstructionError(
                        f"DelSave legality at a_{i} disagrees with f(a_i)=2 and f(phi(a_i))<=1"
                    )
                log.saves_used[v] = use_save
                delete(DelSave(v, target) if use_save else Del(v))
            else:
                delete(Del(v))

    log.pendant_budgets = {p: st.f[p] for p in oc.pendants()}
    for p in oc.pendants():
        delete(Del(p))
    return Trace(graph.size, oc.k + 1, tuple(steps)), log


def odd_strategy(oc: OddConstruction) -> Trace:
    trace, _ = run_odd_strategy(oc)
    return trace


def lift(g: Graph, d: int, labels: Optional[Sequence[Label]] = None) -> LabeledGraph:
    """
    (d+1)-regular graph on V(G) x {0, ..., d+1}: layers 1..d+1 are copies of
    G and (v, 0) is adjacent to every (v, i), i >= 1. `labels` names the base
    vertices; unlabelled bases get `v:<id>` labels.
    """
    if g.n != g.size:
        raise GraphError("lift needs a graph without deleted vertices")
    if regularity(g) != d:
        raise GraphError(f"lift needs a {d}-regular graph")
    n = g.size
    base = list(labels) if labels is not None else [Label("v", v) for v in range(n)]
    if len(base) != n:
        raise GraphError(f"{len(base)} base labels for {n} vertices")
    edges = []
    for layer in range(1, d + 2):
        edges.extend((layer * n + u, layer * n + v) for u, v in g.edges())
        edges.extend((v, layer * n + v) for v in range(n))
    lifted = make_graph(n * (d + 2), edges)
    if regularity(lifted) != d + 1:
        raise ConstructionError(f"lift of a {d}-regular graph is not {d + 1}-regular")
    lifted_labels = tuple(Label(label.role, label.index, layer) for layer in range(d + 2) for label in base)
    return LabeledGraph(lifted, lifted_labels)


def lift_strategy(inner: Trace, g: Graph, d: int) -> Trace:
    """
    Certificate for `lift(g, d)` at constant budget w+1, given a verified
    certificate `inner` for g at constant budget w: Del every layer-0 vertex
    (an independent set) in id order, then replay `inner` on layers 1..d+1.
    """
    w = inner.constant
    if w is None:
        raise ConstructionError("lift_strategy needs an inner certificate with a constant budget")
    report = verify_certificate(g, inner)
    if not report.ok:
        raise ConstructionError(f"inner certificate does not verify: {report}")
    n = g.size
    steps: List[Step] = [Del(v) for v in range(n)]
    for layer in range(1, d + 2):
        shift = layer * n
        for step in inner.steps:
            if isinstance(step, DelSave):
                steps.append(DelSave(step.u + shift, step.w + shift))
            else:
                steps.append(Del(step.u + shift))
    return Trace(n * (d + 2), w + 1, tuple(steps))


class Certified(NamedTuple):
    lg: LabeledGraph
    trace: Trace
    claimed_wd: int


def build_for_degree(d: int) -> Certified:
    """
    A d-regular graph with a certificate at budget floor(d/2)+1. Odd
    d = 2k+1 uses the odd construction; even d lifts the (d-1)-regular odd
    construction. d must be at least 3.
    """
    if d < 3:
        raise ConstructionError(f"no construction for degree {d}; degrees 1 and 2 need k >= 1 (d >= 3)")
    if d % 2 == 1:
        oc = build_odd((d - 1) // 2)
        lg, trace = oc.lg, odd_strategy(oc)
    else:
        oc = build_odd((d - 2) // 2)
        lg = lift(oc.graph, d - 1, oc.lg.labels)
        trace = lift_strategy(odd_strategy(oc), oc.graph, d - 1)
    claimed = regular_lower_bound(d)
    if trace.constant != claimed:
        raise ConstructionError(f"certificate budget {trace.constant} differs from the bound {claimed}")
    report = verify_certificate(lg.graph, trace)
    if not report.ok:
        raise ConstructionError(f"certificate for degree {d} does not verify: {report}")
    return Certified(lg, trace, claimed)


def construction_summary(lg: LabeledGraph, trace: Trace) -> Dict[str, int]:
    return {"n": lg.graph.n, "d": regularity(lg.graph), "wd": trace.constant}
