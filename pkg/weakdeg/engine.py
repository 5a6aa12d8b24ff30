"""
The deletion calculus.

A budget function f assigns every live vertex a nonnegative integer.

- `Del(u)` removes u and lowers f by one on every live neighbor of u. It is
  legal when no neighbor drops below zero; f(u) itself is not constrained.
- `DelSave(u, w)` removes u and lowers f on every live neighbor except the
  adjacent vertex w, whose budget is kept. It is legal when u and w are
  adjacent, f(u) > f(w), and no other neighbor drops below zero.

A `Trace` (certificate) is an initial budget plus an ordered list of steps.
`verify_trace` replays it against a graph and reports the first failing
step, if any. Certificates are stored as JSON:

    {"n": 4, "initial": 2, "steps": [{"op": "del", "u": 0}, ...]}

with 0-based ids; `initial` is a single integer for a constant budget or
an array of n integers.
"""
from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum
import json
import logging
import random
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .graph import Graph, ParseError, WeakDegError, iter_bits

logger = logging.getLogger(__name__)


class FailureReason(Enum):
    ILLEGAL_DEL = "illegal-del"
    ILLEGAL_DELSAVE_BUDGET = "illegal-delsave-budget"
    ILLEGAL_DELSAVE_NONADJACENT = "illegal-delsave-nonadjacent"
    NEGATIVE_RESULT = "negative-result"
    REPEATED_VERTEX = "repeated-vertex"
    INCOMPLETE = "incomplete"


class IllegalStepError(WeakDegError):
    """Raised when an illegal step is applied to a `State`."""

    reason: FailureReason

    def __init__(self, step: "Step", reason: FailureReason):
        super().__init__(f"{step} is illegal: {reason.value}")
        self.step = step
        self.reason = reason


class WeightMap(Mapping):
    """
    Immutable budget function on a set of vertex ids. All values are
    nonnegative; legality of Del and DelSave exists to keep it that way.
    """

    _values: Dict[int, int]

    def __init__(self, values: Dict[int, int]):
        for v, value in values.items():
            if value < 0:
                raise ValueError(f"budget of vertex {v} is negative ({value})")
        self._values = dict(values)

    @classmethod
    def constant(cls, graph: Graph, value: int) -> "WeightMap":
        return cls({v: value for v in graph.vertices()})

    @classmethod
    def from_sequence(cls, values: Sequence[int]) -> "WeightMap":
        return cls(dict(enumerate(values)))

    def total(self) -> int:
        return sum(self._values.values())

    def as_list(self, size: int, missing: int = 0) -> List[int]:
        return [self._values.get(v, missing) for v in range(size)]

    def __getitem__(self, v: int) -> int:
        return self._values[v]

    def __iter__(self):
        return iter(sorted(self._values))

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        return f"WeightMap({dict(sorted(self._values.items()))})"


@dataclass(frozen=True)
class Del:
    u: int

    def to_json(self) -> dict:
        return {"op": "del", "u": self.u}

    def __str__(self) -> str:
        return f"del({self.u})"


@dataclass(frozen=True)
class DelSave:
    u: int
    w: int

    def __post_init__(self):
        if self.u == self.w:
            raise ValueError(f"DelSave needs two distinct vertices, got {self.u} twice")

    def to_json(self) -> dict:
        return {"op": "dels", "u": self.u, "w": self.w}

    def __str__(self) -> str:
        return f"dels({self.u}, {self.w})"


Step = Union[Del, DelSave]


def _check_budget(value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"initial budget {value!r} is not an integer")
    if value < 0:
        raise ValueError(f"initial budget {value} is negative")


@dataclass(frozen=True)
class Trace:
    """
    A deletion certificate for a graph on `n` ids. `initial` is an int for a
    constant budget, or a tuple of n values.
    """

    n: int
    initial: Union[int, Tuple[int, ...]]
    steps: Tuple[Step, ...]

    def __post_init__(self):
        if not isinstance(self.initial, (list, tuple)):
            _check_budget(self.initial)
        else:
            object.__setattr__(self, "initial", tuple(self.initial))
            if len(self.initial) != self.n:
                raise ValueError(f"initial budget has {len(self.initial)} values for {self.n} vertices")
            for value in self.initial:
                _check_budget(value)
        object.__setattr__(self, "steps", tuple(self.steps))
        for i, step in enumerate(self.steps):
            ids = (step.u, step.w) if isinstance(step, DelSave) else (step.u,)
            for v in ids:
                if not 0 <= v < self.n:
                    raise ValueError(f"step {i} names vertex {v} outside 0..{self.n - 1}")

    @property
    def constant(self) -> Optional[int]:
        """The budget value if the initial budget is constant, else `None`."""
        if isinstance(self.initial, int):
            return self.initial
        if self.initial and len(set(self.initial)) == 1:
            return self.initial[0]
        return None

    def initial_weights(self, graph: Graph) -> WeightMap:
        if isinstance(self.initial, int):
            return WeightMap.constant(graph, self.initial)
        return WeightMap({v: self.initial[v] for v in graph.vertices()})

    def saves(self) -> int:
        return sum(1 for step in self.steps if isinstance(step, DelSave))

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class State:
    """A graph with its live mask and the current budget on its live vertices."""

    graph: Graph
    f: WeightMap

    def __post_init__(self):
        if set(self.f) != set(self.graph.vertices()):
            raise ValueError("budget domain does not match the live vertex set")

    @classmethod
    def initial(cls, graph: Graph, f0: WeightMap) -> "State":
        return cls(graph, f0)

    @property
    def is_empty(self) -> bool:
        return self.graph.n == 0


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    failed_at: Optional[int] = None
    reason: Optional[FailureReason] = None

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"failed at step {self.failed_at}: {self.reason.value}"


def _del_failure(graph: Graph, f, u: int) -> Optional[FailureReason]:
    for v in iter_bits(graph.neighbor_mask(u)):
        if f[v] < 1:
            return FailureReason.ILLEGAL_DEL
    return None


def _delsave_failure(graph: Graph, f, u: int, w: int) -> Optional[FailureReason]:
    nbrs = graph.neighbor_mask(u)
    if not nbrs >> w & 1:
        return FailureReason.ILLEGAL_DELSAVE_NONADJACENT
    if f[u] <= f[w]:
        return FailureReason.ILLEGAL_DELSAVE_BUDGET
    for v in iter_bits(nbrs & ~(1 << w)):
        if f[v] < 1:
            return FailureReason.NEGATIVE_RESULT
    return None


def step_failure(graph: Graph, f, step: Step) -> Optional[FailureReason]:
    """Why `step` is illegal on (graph, f), or `None` if it is legal."""
    if not graph.is_live(step.u):
        return FailureReason.REPEATED_VERTEX
    if isinstance(step, DelSave):
        if not graph.is_live(step.w):
            return FailureReason.ILLEGAL_DELSAVE_NONADJACENT
        return _delsave_failure(graph, f, step.u, step.w)
    return _del_failure(graph, f, step.u)


def _apply_unchecked(graph: Graph, f: Dict[int, int], step: Step) -> Graph:
    """Apply a legal step in place on `f`; returns G - u."""
    nbrs = graph.neighbor_mask(step.u)
    if isinstance(step, DelSave):
        nbrs &= ~(1 << step.w)
    for v in iter_bits(nbrs):
        f[v] -= 1
    del f[step.u]
    return graph.remove_vertex(step.u)


def legal_del(st: State, u: int) -> bool:
    return _del_failure(st.graph, st.f, u) is None


def legal_delsave(st: State, u: int, w: int) -> bool:
    st.graph.check_live(w)
    return _delsave_failure(st.graph, st.f, u, w) is None


def apply_step(st: State, step: Step) -> State:
    if isinstance(step, DelSave):
        st.graph.check_live(step.w)
    reason = step_failure(st.graph, st.f, step)
    if reason is not None:
        raise IllegalStepError(step, reason)
    f = dict(st.f.items())
    graph = _apply_unchecked(st.graph, f, step)
    return State(graph, WeightMap(f))


def apply_del(st: State, u: int) -> State:
    st.graph.check_live(u)
    return apply_step(st, Del(u))


def apply_delsave(st: State, u: int, w: int) -> State:
    st.graph.check_live(u)
    return apply_step(st, DelSave(u, w))


def legal_moves(st: State) -> List[Step]:
    """Every legal Del and DelSave at `st`, Del moves first, in id order."""
    graph, f = st.graph, st.f
    moves: List[Step] = [Del(u) for u in graph.vertices() if _del_failure(graph, f, u) is None]
    for u in graph.vertices():
        for w in graph.neighbors(u):
            if _delsave_failure(graph, f, u, w) is None:
                moves.append(DelSave(u, w))
    return moves


def replay(graph: Graph, f0: WeightMap, steps: Sequence[Step]) -> Iterator[State]:
    """Yield the state after each step. Raises `IllegalStepError` on the first illegal one."""
    st = State.initial(graph, f0)
    for step in steps:
        st = apply_step(st, step)
        yield st


def verify_trace(g: Graph, f0: WeightMap, t: Trace) -> VerifyReport:
    """
    Check that every step of `t` is legal in sequence starting from
    (g, f0) and that all vertices end up deleted. Failures are reported,
    never raised; only the first one is reported. The input graph is
    never modified.
    """
    if t.n != g.size:
        raise ValueError(f"trace is for {t.n} vertices, graph has {g.size}")
    if set(f0) != set(g.vertices()):
        raise ValueError("initial budget is not defined on exactly the live vertices")
    f = dict(f0.items())
    graph = g
    for i, step in enumerate(t.steps):
        reason = step_failure(graph, f, step)
        if reason is not None:
            logger.debug(f"trace fails at step {i} ({step}): {reason.value}")
            return VerifyReport(False, i, reason)
        graph = _apply_unchecked(graph, f, step)
    if graph.n:
        return VerifyReport(False, len(t.steps), FailureReason.INCOMPLETE)
    return VerifyReport(True)


def verify_certificate(g: Graph, t: Trace) -> VerifyReport:
    """`verify_trace` against the certificate's own initial budget."""
    return verify_trace(g, t.initial_weights(g), t)


def random_legal_walk(graph: Graph, f0: WeightMap, rng: random.Random, max_steps: Optional[int] = None) -> List[Step]:
    """
    Apply uniformly random legal moves until none is left (or `max_steps`).
    The result is a legal prefix, complete only if the walk got lucky.
    """
    st = State.initial(graph, f0)
    steps: List[Step] = []
    while not st.is_empty and (max_steps is None or len(steps) < max_steps):
        moves = legal_moves(st)
        if not moves:
            break
        step = rng.choice(moves)
        st = apply_step(st, step)
        steps.append(step)
    return steps


def trace_to_certificate(t: Trace) -> str:
    """Canonical JSON text: keys in the order n, initial, steps; one step per line."""
    initial = t.initial if isinstance(t.initial, int) else list(t.initial)
    lines = [
        "{",
        f'  "n": {t.n},',
        f'  "initial": {json.dumps(initial)},',
    ]
    if not t.steps:
        lines.append('  "steps": []')
    else:
        lines.append('  "steps": [')
        body = [f"    {json.dumps(step.to_json())}" for step in t.steps]
        lines.append(",\n".join(body))
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _step_from_json(i: int, obj) -> Step:
    if not isinstance(obj, dict):
        raise ParseError(None, f"step {i} is not an object")
    op = obj.get("op")
    try:
        if op == "del":
            return Del(int(obj["u"]))
        if op == "dels":
            return DelSave(int(obj["u"]), int(obj["w"]))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(None, f"step {i}: {e}")
    raise ParseError(None, f"step {i} has unknown op {op!r}")


def certificate_to_trace(text: str) -> Trace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.lineno, e.msg)
    if not isinstance(data, dict):
        raise ParseError(None, "certificate must be a JSON object")
    for key in ("n", "initial", "steps"):
        if key not in data:
            raise ParseError(None, f"certificate is missing {key!r}")
    if not isinstance(data["steps"], list):
        raise ParseError(None, "'steps' must be an array")
    initial = data["initial"]
    if isinstance(initial, list):
        initial = tuple(initial)
    elif isinstance(initial, bool) or not isinstance(initial, int):
        raise ParseError(None, "'initial' must be an integer or an array of integers")
    steps = tuple(_step_from_json(i, obj) for i, obj in enumerate(data["steps"]))
    try:
        return Trace(int(data["n"]), initial, steps)
    except (TypeError, ValueError) as e:
        raise ParseError(None, str(e))


def read_certificate(path: str) -> Trace:
    with open(path, "r") as f:
        return certificate_to_trace(f.read())


def write_certificate(t: Trace, path: str):
    with open(path, "w") as f:
        f.write(trace_to_certificate(t))
