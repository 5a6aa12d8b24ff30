"""
Exact computation of weak degeneracy, degeneracy, f-degeneracy and the
chromatic number, plus unoptimized oracles used to cross-check them.

The weak-degeneracy search works on (live mask, budget vector) states and
caches every state proven infeasible. Budgets are never clamped: DelSave
compares f(u) > f(w), and clamping could flip that comparison.
"""
from dataclasses import dataclass, field
import logging
import time
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .audit import regular_bound_applies, regular_lower_bound
from .engine import Del, DelSave, Step, Trace, WeightMap, step_failure, _apply_unchecked
from .graph import Graph, WeakDegError, iter_bits, popcount, regularity

logger = logging.getLogger(__name__)

BRANCHING_ORDERS = ("heuristic", "plain")


class SearchLimitError(WeakDegError):
    """The instance is larger than the configured cap for the requested computation."""

    def __init__(self, what: str, n: int, cap: int):
        super().__init__(f"{what} supports at most {cap} vertices, graph has {n}")
        self.what = what
        self.n = n
        self.cap = cap


@dataclass
class SearchLimits:
    """
    Caps and switches for the exact solvers. Usually built from a yaml
    solver configuration by `weakdeg.__main__.parse_config`.
    """

    max_search_vertices: int = 32
    brute_force_vertices: int = 8
    chromatic_vertices: int = 10
    # pointwise dominance against infeasible budgets on the same mask;
    # sound because feasibility is monotone in f, which is not assumed by default
    dominance_pruning: bool = False
    branching: str = "heuristic"
    workers: int = 1

    def __post_init__(self):
        if self.branching not in BRANCHING_ORDERS:
            raise ValueError(f"branching must be one of {BRANCHING_ORDERS}, got {self.branching!r}")
        if self.workers < 1:
            raise ValueError(f"worker count must be positive, got {self.workers}")


@dataclass
class SolveStats:
    nodes: int = 0
    memo_hits: int = 0
    pruned: int = 0
    elapsed: float = 0.0

    def merge(self, o: "SolveStats"):
        self.nodes += o.nodes
        self.memo_hits += o.memo_hits
        self.pruned += o.pruned

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "memo_hits": self.memo_hits,
            "pruned": self.pruned,
            "elapsed": round(self.elapsed, 6),
        }


@dataclass
class SolveResult:
    value: int
    witness: Optional[Trace] = None
    stats: SolveStats = field(default_factory=SolveStats)


def _check_cap(what: str, g: Graph, cap: int):
    if g.n > cap:
        raise SearchLimitError(what, g.n, cap)


_Move = Tuple[Step, int, Tuple[int, ...]]


class WeakDegeneracySearch:
    """
    Depth-first search for a complete legal deletion sequence.

    One instance can answer many feasibility queries on the same graph;
    the infeasibility cache is kept between them, which is what makes the
    upward iteration over d in `weak_degeneracy` cheap.
    """

    def __init__(self, graph: Graph, limits: Optional[SearchLimits] = None):
        self.graph = graph
        self.limits = limits or SearchLimits()
        self.stats = SolveStats()
        self._adj = [graph.neighbor_mask(v) if graph.is_live(v) else 0 for v in range(graph.size)]
        self._infeasible = set()
        self._dominated: Dict[int, List[Tuple[int, ...]]] = {}

    def initial_vector(self, f: WeightMap) -> Tuple[int, ...]:
        return tuple(f.as_list(self.graph.size))

    def moves(self, mask: int, f: Tuple[int, ...]) -> List[_Move]:
        """Legal moves from a state with their child states, in branching order."""
        adj = self._adj
        zero = 0
        isolated = None
        for v in iter_bits(mask):
            if f[v] == 0:
                zero |= 1 << v
            if isolated is None and not adj[v] & mask:
                isolated = v
        if isolated is not None:
            # an isolated vertex touches nothing; deleting it now loses nothing
            return [(Del(isolated), mask & ~(1 << isolated), self._child(f, isolated, 0))]

        dels = []
        saves = []
        for u in iter_bits(mask):
            nbrs = adj[u] & mask
            if not nbrs & zero:
                dels.append(u)
            fu = f[u]
            for w in iter_bits(nbrs):
                if fu > f[w] and not nbrs & zero & ~(1 << w):
                    saves.append((u, w))
        if self.limits.branching == "heuristic":
            dels.sort(key=lambda u: (popcount(adj[u] & mask), u))
            saves.sort(key=lambda p: (f[p[1]] - f[p[0]], p[0], p[1]))

        result: List[_Move] = []
        for u in dels:
            result.append((Del(u), mask & ~(1 << u), self._child(f, u, adj[u] & mask)))
        for u, w in saves:
            result.append((DelSave(u, w), mask & ~(1 << u), self._child(f, u, adj[u] & mask & ~(1 << w))))
        return result

    @staticmethod
    def _child(f: Tuple[int, ...], u: int, hit: int) -> Tuple[int, ...]:
        child = list(f)
        for v in iter_bits(hit):
            child[v] -= 1
        child[u] = 0
        return tuple(child)

    def _is_dominated(self, mask: int, f: Tuple[int, ...]) -> bool:
        for bad in self._dominated.get(mask, ()):
            if all(a <= b for a, b in zip(f, bad)):
                return True
        return False

    def solve_state(self, mask: int, f: Tuple[int, ...]) -> Optional[List[Step]]:
        """Steps removing every vertex of `mask` from budget `f`, or `None`."""
        steps: List[Step] = []
        if self._solve(mask, f, steps):
            steps.reverse()
            return steps
        return None

    def _solve(self, mask: int, f: Tuple[int, ...], out: List[Step]) -> bool:
        self.stats.nodes += 1
        if not mask:
            return True
        key = (mask, f)
        if key in self._infeasible:
            self.stats.memo_hits += 1
            return False
        if self.limits.dominance_pruning and self._is_dominated(mask, f):
            self.stats.pruned += 1
            return False
        for step, child_mask, child_f in self.moves(mask, f):
            if self._solve(child_mask, child_f, out):
                out.append(step)
                return True
        self._infeasible.add(key)
        if self.limits.dominance_pruning:
            self._dominated.setdefault(mask, []).append(f)
        return False

    def search(self, f: WeightMap) -> Optional[List[Step]]:
        return self.solve_state(self.graph.live, self.initial_vector(f))


def is_weakly_f_degenerate(g: Graph, f: WeightMap, limits: Optional[SearchLimits] = None) -> Optional[Trace]:
    """A legal complete trace from budget f if one exists, else `None`."""
    limits = limits or SearchLimits()
    _check_cap("exact weak-degeneracy search", g, limits.max_search_vertices)
    if set(f) != set(g.vertices()):
        raise ValueError("budget must be defined on exactly the live vertices")
    steps = WeakDegeneracySearch(g, limits).search(f)
    if steps is None:
        return None
    return Trace(g.size, tuple(f.as_list(g.size)), tuple(steps))


def weak_degeneracy(g: Graph, limits: Optional[SearchLimits] = None, deterministic: bool = True) -> SolveResult:
    """
    wd(G) with a witness trace at constant budget wd(G).

    d runs upward from the best lower bound that applies (the regular-graph
    bound for d-regular graphs with d >= 1, else 0). The first feasible d
    is the answer; if none below d(G) is feasible, d(G) is the answer and
    the degeneracy order is the witness.
    """
    limits = limits or SearchLimits()
    _check_cap("exact weak-degeneracy search", g, limits.max_search_vertices)
    started = time.perf_counter()
    nd = degeneracy(g)
    reg = regularity(g)
    lower = regular_lower_bound(reg) if reg is not None and regular_bound_applies(reg) else 0
    search = WeakDegeneracySearch(g, limits)
    stats = SolveStats()
    parallel = not deterministic and limits.workers > 1

    for d in range(lower, nd.value):
        logger.debug(f"trying weak {d}-degeneracy on {g!r}")
        f = WeightMap.constant(g, d)
        if parallel:
            from .workers import race_branches

            steps, branch_stats = race_branches(g, f, limits)
            stats.merge(branch_stats)
        else:
            steps = search.search(f)
        if steps is not None:
            stats.merge(search.stats)
            stats.elapsed = time.perf_counter() - started
            return SolveResult(d, Trace(g.size, d, tuple(steps)), stats)

    stats.merge(search.stats)
    stats.elapsed = time.perf_counter() - started
    return SolveResult(nd.value, degeneracy_certificate(g, nd), stats)


def _brute_feasible(graph: Graph, f: Dict[int, int]) -> bool:
    if graph.n == 0:
        return True
    for u in graph.vertices():
        candidates: List[Step] = [Del(u)]
        candidates.extend(DelSave(u, w) for w in graph.neighbors(u))
        for step in candidates:
            if step_failure(graph, f, step) is not None:
                continue
            child = dict(f)
            if _brute_feasible(_apply_unchecked(graph, child, step), child):
                return True
    return False


def brute_force_weak_degeneracy(g: Graph, limits: Optional[SearchLimits] = None) -> int:
    """
    wd(G) by plain recursion over every legal step at every state, with no
    cache, no reductions and no move ordering. Only an oracle for tests.
    """
    limits = limits or SearchLimits()
    _check_cap("brute-force weak degeneracy", g, limits.brute_force_vertices)
    top = max((g.degree(v) for v in g.vertices()), default=0)
    for d in range(top + 1):
        if _brute_feasible(g, {v: d for v in g.vertices()}):
            return d
    # with budget equal to the maximum degree any Del order works
    raise AssertionError("unreachable: maximum degree is always a feasible budget")


class Degeneracy(NamedTuple):
    value: int
    order: List[int]


def degeneracy(g: Graph) -> Degeneracy:
    """
    d(G) by min-degree peeling (ties to the smallest id). `order` is the
    reverse of the peeling sequence, which is a legal all-Del deletion order
    at constant budget d(G): every vertex has at most d(G) neighbors deleted
    before it.
    """
    remaining = g.live
    degree = {v: g.degree(v) for v in g.vertices()}
    peeled = []
    value = 0
    while remaining:
        v = min(iter_bits(remaining), key=lambda x: (degree[x], x))
        value = max(value, degree[v])
        peeled.append(v)
        remaining &= ~(1 << v)
        for w in iter_bits(g.neighbor_mask(v) & remaining):
            degree[w] -= 1
    peeled.reverse()
    return Degeneracy(value, peeled)


def degeneracy_certificate(g: Graph, nd: Optional[Degeneracy] = None) -> Trace:
    nd = nd or degeneracy(g)
    return Trace(g.size, nd.value, tuple(Del(v) for v in nd.order))


def is_f_degenerate(g: Graph, f: WeightMap) -> Optional[List[int]]:
    """
    A legal all-Del deletion order from budget f, or `None`.

    A Del sequence is legal exactly when every vertex has at most f(v)
    neighbors deleted before it. Vertices are therefore peeled from the
    back: any vertex whose live degree is at most its budget can go last.
    Peeling only lowers degrees, so the choice never matters.
    """
    remaining = g.live
    back = []
    while remaining:
        for v in iter_bits(remaining):
            if popcount(g.neighbor_mask(v) & remaining) <= f[v]:
                break
        else:
            return None
        back.append(v)
        remaining &= ~(1 << v)
    back.reverse()
    return back


def is_f_degenerate_exhaustive(g: Graph, f: WeightMap, cap: int = 7) -> Optional[List[int]]:
    """Del-only exhaustive search; the oracle `is_f_degenerate` is tested against."""
    _check_cap("exhaustive f-degeneracy", g, cap)

    def go(graph: Graph, budget: Dict[int, int], order: List[int]) -> Optional[List[int]]:
        if graph.n == 0:
            return order
        for u in graph.vertices():
            if step_failure(graph, budget, Del(u)) is None:
                child = dict(budget)
                found = go(_apply_unchecked(graph, child, Del(u)), child, order + [u])
                if found is not None:
                    return found
        return None

    return go(g, dict(f.items()), [])


def chromatic_number(g: Graph, limits: Optional[SearchLimits] = None) -> int:
    """χ(G) by DSATUR-ordered backtracking with the best-so-far as the bound."""
    limits = limits or SearchLimits()
    _check_cap("chromatic number", g, limits.chromatic_vertices)
    vertices = g.vertices()
    if not vertices:
        return 0
    adj = {v: g.neighbors(v) for v in vertices}
    colors: Dict[int, int] = {}
    best = len(vertices)

    def pick() -> Optional[int]:
        uncolored = [v for v in vertices if v not in colors]
        if not uncolored:
            return None
        return max(uncolored, key=lambda v: (len({colors[w] for w in adj[v] if w in colors}), len(adj[v]), -v))

    def backtrack(used: int):
        nonlocal best
        v = pick()
        if v is None:
            best = min(best, used)
            return
        taken = {colors[w] for w in adj[v] if w in colors}
        for c in range(min(used + 1, best - 1)):
            if c in taken:
                continue
            colors[v] = c
            backtrack(max(used, c + 1))
            del colors[v]
            if best <= max(used, 1):
                return

    backtrack(0)
    return best
