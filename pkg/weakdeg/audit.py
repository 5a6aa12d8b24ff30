"""
Bookkeeping over deletion traces, and the closed-form lower bounds on the
weak degeneracy of regular graphs.

For a trace deleting v_1, ..., v_n with budgets f_1, ..., f_n on the
shrinking graphs G_1, ..., G_n:

- s_i is the total budget on G_i, and s_{n+1} = 0;
- x_i is 1 when v_i is removed by DelSave, else 0;
- y_i counts the DelSave steps whose saved vertex is v_i.

Every legal trace satisfies, exactly:

- s_i - s_{i+1} = f_i(v_i) + deg_{G_i}(v_i) - x_i
- sum of x_i = sum of y_i
- f_1(v_i) - f_i(v_i) = (neighbors of v_i deleted before step i) - y_i
- x_i <= f_i(v_i)

`audit_trace` recomputes all of these for a verified trace.
"""
from dataclasses import dataclass
import json
import logging
import math
from typing import Dict, List, Optional, Tuple

from .engine import DelSave, Trace, WeightMap, _apply_unchecked, verify_trace
from .graph import Graph, WeakDegError, popcount

logger = logging.getLogger(__name__)


class AuditError(WeakDegError):
    """Raised when asked to audit a trace that does not verify."""


def regular_bound_applies(d: int) -> bool:
    """The regular-graph bound needs at least one edge per vertex."""
    return d >= 1


def regular_lower_bound(d: int) -> int:
    """
    floor(d/2) + 1, the lower bound on wd(G) for every d-regular G.

    For d = 0 the value is returned but does not bound anything (an edgeless
    graph has weak degeneracy 0); a warning is logged.
    """
    if d < 0:
        raise ValueError(f"degree must be nonnegative, got {d}")
    if not regular_bound_applies(d):
        logger.warning("regular lower bound is not applicable to edgeless graphs (d=0)")
    return d // 2 + 1


def counting_lower_bound(d: int, n: int) -> float:
    """d - sqrt(2n) for a d-regular graph on n >= 2 vertices. May be negative."""
    if n < 2:
        raise ValueError(f"counting bound needs at least 2 vertices, got {n}")
    return d - math.sqrt(2 * n)


@dataclass(frozen=True)
class AuditRecord:
    """Quantities of step i (1-based) of a trace."""

    index: int
    vertex: int
    saved: Optional[int]
    budget: int
    initial: int
    residual_degree: int
    deleted_neighbors: int
    x: int
    y: int
    s: int
    s_next: int

    @property
    def op(self) -> str:
        return "dels" if self.x else "del"

    @property
    def drop(self) -> int:
        return self.s - self.s_next

    @property
    def sum_identity_ok(self) -> bool:
        return self.drop == self.budget + self.residual_degree - self.x

    @property
    def budget_identity_ok(self) -> bool:
        return self.initial - self.budget == self.deleted_neighbors - self.y

    @property
    def save_budget_ok(self) -> bool:
        return self.x <= self.budget

    def to_json(self) -> dict:
        return {
            "i": self.index,
            "v": self.vertex,
            "op": self.op,
            "w": self.saved,
            "f": self.budget,
            "deg": self.residual_degree,
            "x": self.x,
            "y": self.y,
            "s": self.s,
            "s_next": self.s_next,
        }


_COLUMNS = ("i", "v", "op", "w", "f", "deg", "x", "y", "s", "s_next")


@dataclass(frozen=True)
class AuditReport:
    records: Tuple[AuditRecord, ...]
    sums: Tuple[int, ...]
    saves_received: Dict[int, int]

    @property
    def sum_identity_ok(self) -> bool:
        return all(r.sum_identity_ok for r in self.records)

    @property
    def save_balance_ok(self) -> bool:
        return sum(r.x for r in self.records) == sum(self.saves_received.values())

    @property
    def budget_identity_ok(self) -> bool:
        return all(r.budget_identity_ok for r in self.records)

    @property
    def save_budget_ok(self) -> bool:
        return all(r.save_budget_ok for r in self.records)

    @property
    def y_consistent(self) -> bool:
        """y_i counted as of step i equals the count over the whole trace."""
        return all(r.y == self.saves_received.get(r.vertex, 0) for r in self.records)

    @property
    def ok(self) -> bool:
        return (
            self.sum_identity_ok
            and self.save_balance_ok
            and self.budget_identity_ok
            and self.save_budget_ok
            and self.y_consistent
        )

    def flags(self) -> Dict[str, bool]:
        return {
            "sum_identity": self.sum_identity_ok,
            "save_balance": self.save_balance_ok,
            "budget_identity": self.budget_identity_ok,
            "save_budget": self.save_budget_ok,
            "y_consistent": self.y_consistent,
        }

    def to_table(self, delimiter: str = "\t") -> str:
        rows = [delimiter.join(_COLUMNS)]
        for r in self.records:
            rows.append(delimiter.join("-" if r.to_json()[c] is None else str(r.to_json()[c]) for c in _COLUMNS))
        for name, value in self.flags().items():
            rows.append(f"# {name}={'ok' if value else 'FAIL'}")
        return "\n".join(rows) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "records": [r.to_json() for r in self.records],
                "sums": list(self.sums),
                "flags": self.flags(),
            },
            indent=2,
        ) + "\n"


def audit_trace(g: Graph, f0: WeightMap, t: Trace) -> AuditReport:
    report = verify_trace(g, f0, t)
    if not report.ok:
        raise AuditError(f"cannot audit a trace that does not verify: {report}")

    f = dict(f0.items())
    graph = g
    deleted = 0
    saves_received: Dict[int, int] = {}
    records: List[AuditRecord] = []
    sums = [sum(f.values())]
    for i, step in enumerate(t.steps, start=1):
        u = step.u
        saved = step.w if isinstance(step, DelSave) else None
        budget = f[u]
        residual = graph.degree(u)
        before = popcount(g.neighbor_mask(u) & deleted)
        y = saves_received.get(u, 0)
        s = sums[-1]
        graph = _apply_unchecked(graph, f, step)
        deleted |= 1 << u
        if saved is not None:
            saves_received[saved] = saves_received.get(saved, 0) + 1
        sums.append(sum(f.values()))
        records.append(
            AuditRecord(
                index=i,
                vertex=u,
                saved=saved,
                budget=budget,
                initial=f0[u],
                residual_degree=residual,
                deleted_neighbors=before,
                x=0 if saved is None else 1,
                y=y,
                s=s,
                s_next=sums[-1],
            )
        )
    return AuditReport(tuple(records), tuple(sums), saves_received)


def simulate_sums(g: Graph, f0: WeightMap, t: Trace) -> List[int]:
    """
    s_1, ..., s_{n+1} by direct simulation on plain adjacency sets, sharing
    no code with the engine. Used to check the auditor.
    """
    adjacency = {v: set() for v in g.vertices()}
    for u, v in g.edges():
        adjacency[u].add(v)
        adjacency[v].add(u)
    budget = {v: f0[v] for v in g.vertices()}
    sums = [sum(budget.values())]
    for step in t.steps:
        keep = getattr(step, "w", None)
        for v in adjacency.pop(step.u):
            adjacency[v].discard(step.u)
            if v != keep:
                budget[v] -= 1
        del budget[step.u]
        sums.append(sum(budget.values()))
    return sums


def counting_slack(report: AuditReport, d: int) -> List[float]:
    """
    Per-step (s_i - s_{i+1}) - (d/2 + x_i - y_i) for a trace on a d-regular
    graph. The slacks always sum to s_1 - n*d/2; a constant budget at most
    d/2 would force every slack to be zero, which step 1 cannot meet.
    """
    return [r.drop - (d / 2 + r.x - r.y) for r in report.records]
