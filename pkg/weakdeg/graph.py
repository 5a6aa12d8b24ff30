"""
Immutable simple graphs with stable vertex ids, and the text formats used
for graph and label files.

Vertices are dense 0-based integer ids. Deleting a vertex never renumbers
anything: a `Graph` carries a live-vertex mask, so ids named in a deletion
certificate keep meaning the same vertex for the whole deletion sequence.

Graph files use a DIMACS-like format with 1-based ids:

    c optional comment
    p edge <n> <m>
    e <u> <v>
    ...

Emission is canonical (edges sorted, `u < v`), so two equal graphs always
serialize to the same bytes.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

logger = logging.getLogger(__name__)


class WeakDegError(Exception):
    """Base class for every error raised by weakdeg."""


class GraphError(WeakDegError):
    """Invalid graph input: loops, out-of-range ids, dead vertices."""


class ParseError(GraphError):
    """
    A text file could not be parsed. `line` is 1-based, or `None` when the
    defect is structural and has no single line (JSON certificates).
    """

    line: Optional[int]
    message: str

    def __init__(self, line: Optional[int], message: str):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
        self.message = message


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of `mask` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """
    Simple undirected graph over the id space `0..size-1`, of which the ids
    in the `live` mask are present.

    `n` is the number of live vertices. Adjacency is stored as one bitmask
    per id; every query only ever reports live neighbors. Instances are
    values: operations return new graphs and never mutate this one, so a
    graph can be shared between worker processes freely.
    """

    __slots__ = ("_size", "_adj", "_live")

    _size: int
    _adj: Tuple[int, ...]
    _live: int

    def __init__(self, size: int, adj_masks: Sequence[int], live: Optional[int] = None):
        if size < 0:
            raise GraphError(f"vertex count must be nonnegative, got {size}")
        if len(adj_masks) != size:
            raise GraphError(f"expected {size} adjacency masks, got {len(adj_masks)}")
        full = (1 << size) - 1
        for v, mask in enumerate(adj_masks):
            if mask & ~full:
                raise GraphError(f"vertex {v} has a neighbor outside 0..{size - 1}")
            if mask >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            for w in iter_bits(mask):
                if not adj_masks[w] >> v & 1:
                    raise GraphError(f"adjacency is not symmetric for {v}-{w}")
        self._size = size
        self._adj = tuple(adj_masks)
        self._live = full if live is None else live & full

    @property
    def size(self) -> int:
        """Size of the id space (live or not)."""
        return self._size

    @property
    def live(self) -> int:
        """Bitmask of live vertex ids."""
        return self._live

    @property
    def n(self) -> int:
        return popcount(self._live)

    def vertices(self) -> List[int]:
        return list(iter_bits(self._live))

    def is_live(self, v: int) -> bool:
        return 0 <= v < self._size and bool(self._live >> v & 1)

    def check_live(self, v: int):
        """Raise `GraphError` unless v is a live vertex."""
        if not self.is_live(v):
            raise GraphError(f"vertex {v} is not a live vertex of this graph")

    def neighbor_mask(self, v: int) -> int:
        self.check_live(v)
        return self._adj[v] & self._live

    def neighbors(self, v: int) -> List[int]:
        return list(iter_bits(self.neighbor_mask(v)))

    def degree(self, v: int) -> int:
        return popcount(self.neighbor_mask(v))

    def adjacent(self, u: int, v: int) -> bool:
        return self.is_live(u) and self.is_live(v) and bool(self._adj[u] >> v & 1)

    def edges(self) -> List[Tuple[int, int]]:
        """Live edges as sorted `(u, v)` pairs with `u < v`."""
        return [
            (u, v)
            for u in iter_bits(self._live)
            for v in iter_bits(self._adj[u] & self._live)
            if u < v
        ]

    @property
    def edge_count(self) -> int:
        return sum(popcount(self._adj[v] & self._live) for v in iter_bits(self._live)) // 2

    def remove_vertex(self, u: int) -> "Graph":
        """G - u. Ids of the remaining vertices are unchanged."""
        self.check_live(u)
        return self._with_live(self._live & ~(1 << u))

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """G[S] for a set S of live vertices."""
        mask = 0
        for v in vertices:
            self.check_live(v)
            mask |= 1 << v
        return self._with_live(mask)

    def components(self) -> List[List[int]]:
        """Connected components of the live part, each sorted, ordered by smallest id."""
        seen = 0
        result = []
        for root in iter_bits(self._live):
            if seen >> root & 1:
                continue
            comp = 1 << root
            frontier = comp
            while frontier:
                grown = 0
                for v in iter_bits(frontier):
                    grown |= self._adj[v]
                frontier = grown & self._live & ~comp
                comp |= frontier
            seen |= comp
            result.append(list(iter_bits(comp)))
        return result

    def _with_live(self, live: int) -> "Graph":
        g = Graph.__new__(Graph)
        g._size = self._size
        g._adj = self._adj
        g._live = live
        return g

    def to_networkx(self) -> nx.Graph:
        nxg = nx.Graph()
        nxg.add_nodes_from(self.vertices())
        nxg.add_edges_from(self.edges())
        return nxg

    @classmethod
    def from_networkx(cls, nxg: nx.Graph) -> "Graph":
        """
        Build a graph from a networkx graph. Nodes are renumbered to
        `0..n-1` in the networkx node iteration order.
        """
        relabeled = nx.convert_node_labels_to_integers(nxg, ordering="default")
        return make_graph(relabeled.number_of_nodes(), list(relabeled.edges()))

    def _key(self):
        return (self._size, self._live, tuple(self._adj[v] & self._live for v in iter_bits(self._live)))

    def __eq__(self, o) -> bool:
        if not isinstance(o, Graph):
            return NotImplemented
        return self._key() == o._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count}, size={self._size})"


def make_graph(n: int, edges: Iterable[Tuple[int, int]]) -> Graph:
    """
    Build a graph on ids `0..n-1` with the given edges. Repeated pairs are
    merged; self-loops and out-of-range ids are rejected.
    """
    if n < 0:
        raise GraphError(f"vertex count must be nonnegative, got {n}")
    adj = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an id outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, adj)


def regularity(g: Graph) -> Optional[int]:
    """The common degree if `g` is regular, else `None`. The empty graph is 0-regular."""
    degrees = {g.degree(v) for v in g.vertices()}
    if not degrees:
        return 0
    if len(degrees) == 1:
        return degrees.pop()
    return None


def remove_vertex(g: Graph, u: int) -> Graph:
    return g.remove_vertex(u)


def disjoint_union(*graphs: Graph) -> Graph:
    """Union with ids of later graphs shifted past earlier ones. Inputs must be fully live."""
    edges = []
    offset = 0
    for g in graphs:
        if g.n != g.size:
            raise GraphError("disjoint_union needs graphs without deleted vertices")
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.size
    return make_graph(offset, edges)


def _parse_count(token: str, line: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(line, f"{what} {token!r} is not an integer")
    if value < 0:
        raise ParseError(line, f"{what} must be nonnegative, got {value}")
    return value


def parse_graph(text: str) -> Graph:
    """Parse the DIMACS-like graph format (1-based ids)."""
    n = None
    m = None
    header_line = 0
    lineno = 0
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        kind = tokens[0]
        if kind == "p":
            if n is not None:
                raise ParseError(lineno, "duplicate header")
            if len(tokens) != 4 or tokens[1] != "edge":
                raise ParseError(lineno, f"malformed header {raw.strip()!r}, expected 'p edge <n> <m>'")
            n = _parse_count(tokens[2], lineno, "vertex count")
            m = _parse_count(tokens[3], lineno, "edge count")
            header_line = lineno
        elif kind == "e":
            if n is None:
                raise ParseError(lineno, "edge before header")
            if len(tokens) != 3:
                raise ParseError(lineno, f"malformed edge line {raw.strip()!r}")
            u = _parse_count(tokens[1], lineno, "vertex id")
            v = _parse_count(tokens[2], lineno, "vertex id")
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError(lineno, f"vertex id {x} out of range 1..{n}")
            if u == v:
                raise ParseError(lineno, f"self-loop at vertex {u}")
            pair = (min(u, v) - 1, max(u, v) - 1)
            if pair in seen:
                raise ParseError(lineno, f"repeated edge {u}-{v}; multigraphs are not supported")
            seen.add(pair)
            edges.append(pair)
        else:
            raise ParseError(lineno, f"unknown line type {kind!r}")
    if n is None:
        raise ParseError(max(lineno, 1), "missing 'p edge' header")
    if len(edges) != m:
        raise ParseError(header_line, f"header declares {m} edges but {len(edges)} were given")
    return make_graph(n, edges)


def emit_graph(g: Graph) -> str:
    if g.n != g.size:
        raise GraphError("cannot emit a graph with deleted vertices; ids would not be dense")
    edges = g.edges()
    lines = [f"p edge {g.size} {len(edges)}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return "\n".join(lines) + "\n"


def read_graph(path: str) -> Graph:
    with open(path, "r") as f:
        return parse_graph(f.read())


def write_graph(g: Graph, path: str):
    with open(path, "w") as f:
        f.write(emit_graph(g))


ROLES = ("a", "b", "c", "p", "v")


@dataclass(frozen=True)
class Label:
    """
    Role tag of a vertex in a generated graph. `a`, `b`, `c` carry the index
    i in 1..s, `p` the pendant number j in 1..|V2|, and `v` marks a vertex of
    an unlabelled base graph by its id. `layer` is set on lifted graphs.
    """

    role: str
    index: int
    layer: Optional[int] = None

    def __post_init__(self):
        if self.role not in ROLES:
            raise GraphError(f"unknown role {self.role!r}, expected one of {ROLES}")

    def __str__(self) -> str:
        text = f"{self.role}:{self.index}"
        if self.layer is not None:
            text += f"@{self.layer}"
        return text

    @classmethod
    def parse(cls, text: str) -> "Label":
        head, _, layer = text.partition("@")
        role, sep, index = head.partition(":")
        if not sep:
            raise ValueError(f"label {text!r} is missing ':'")
        return cls(role, int(index), int(layer) if layer else None)


@dataclass(frozen=True)
class LabeledGraph:
    """A graph plus one distinct `Label` per vertex id."""

    graph: Graph
    labels: Tuple[Label, ...]
    _by_label: Dict[Label, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.labels) != self.graph.size:
            raise GraphError(f"{len(self.labels)} labels for {self.graph.size} vertices")
        by_label = {label: v for v, label in enumerate(self.labels)}
        if len(by_label) != len(self.labels):
            raise GraphError("labels are not distinct")
        object.__setattr__(self, "_by_label", by_label)

    def label(self, v: int) -> Label:
        return self.labels[v]

    def vertex(self, label: Label) -> int:
        return self._by_label[label]

    def with_role(self, role: str) -> List[int]:
        return [v for v, label in enumerate(self.labels) if label.role == role]


def emit_labels(lg: LabeledGraph) -> str:
    """One `<id> <label>` line per vertex, 0-based ids like certificates."""
    return "".join(f"{v} {label}\n" for v, label in enumerate(lg.labels))


def parse_labels(text: str, graph: Graph) -> LabeledGraph:
    labels: List[Optional[Label]] = [None] * graph.size
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens:
            continue
        if len(tokens) != 2:
            raise ParseError(lineno, f"expected '<id> <label>', got {raw.strip()!r}")
        v = _parse_count(tokens[0], lineno, "vertex id")
        if v >= graph.size:
            raise ParseError(lineno, f"vertex id {v} out of range 0..{graph.size - 1}")
        if labels[v] is not None:
            raise ParseError(lineno, f"vertex {v} labelled twice")
        try:
            labels[v] = Label.parse(tokens[1])
        except (ValueError, GraphError) as e:
            raise ParseError(lineno, str(e))
    missing = [v for v, label in enumerate(labels) if label is None]
    if missing:
        raise ParseError(max(len(text.splitlines()), 1), f"no label for vertex {missing[0]}")
    return LabeledGraph(graph, tuple(labels))
