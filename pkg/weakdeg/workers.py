"""
Runs solver work on worker processes, driven by asyncio.

Two shapes of parallelism are offered:

- `run_parallel` maps a function over independent jobs (one corpus graph
  each) and returns the results in input order, whatever order the
  workers finish in.
- `race_branches` splits one feasibility search at its root and takes the
  first branch that finds a complete trace. The feasibility answer does
  not depend on scheduling; which witness comes back may.

The worker count comes from `--workers`, then the `WEAKDEG_WORKERS`
environment variable, then the solver configuration. Deterministic runs
always use a single worker.
"""
import asyncio
from concurrent.futures import ProcessPoolExecutor
import logging
import os
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

from .engine import Step, WeightMap
from .graph import Graph
from .solver import SearchLimits, SolveStats, WeakDegeneracySearch

logger = logging.getLogger(__name__)

WORKERS_ENV = "WEAKDEG_WORKERS"

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(requested: Optional[int], limits: SearchLimits, deterministic: bool) -> int:
    if deterministic:
        return 1
    if requested is not None:
        count = requested
    elif os.environ.get(WORKERS_ENV):
        try:
            count = int(os.environ[WORKERS_ENV])
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {os.environ[WORKERS_ENV]!r}")
    else:
        count = limits.workers
    if count < 1:
        raise ValueError(f"worker count must be positive, got {count}")
    return count


async def _gather(func: Callable[[T], R], items: Sequence[T], workers: int) -> List[R]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(await asyncio.gather(*(loop.run_in_executor(pool, func, item) for item in items)))


def run_parallel(func: Callable[[T], R], items: Sequence[T], workers: int) -> List[R]:
    """`[func(x) for x in items]`, spread over `workers` processes."""
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.info(f"running {len(items)} jobs on {workers} workers")
    return asyncio.run(_gather(func, items, workers))


def _solve_branch(graph: Graph, limits: SearchLimits, mask: int, f: Tuple[int, ...]) -> Tuple[Optional[List[Step]], SolveStats]:
    search = WeakDegeneracySearch(graph, limits)
    return search.solve_state(mask, f), search.stats


def _stop_pool(pool: ProcessPoolExecutor):
    """
    Shut the pool down and kill the branches still running. Cancelling a
    future only drops work that has not started, so running losers are
    terminated and joined before the race returns.
    """
    # the executor has no public handle on its worker processes
    processes = list((pool._processes or {}).values())
    pool.shutdown(wait=False, cancel_futures=True)
    running = [process for process in processes if process.is_alive()]
    for process in running:
        process.terminate()
    for process in processes:
        process.join()
    if running:
        logger.debug(f"terminated {len(running)} worker processes after the race")


async def _race(graph: Graph, f: WeightMap, limits: SearchLimits) -> Tuple[Optional[List[Step]], SolveStats]:
    root = WeakDegeneracySearch(graph, limits)
    start = root.initial_vector(f)
    stats = SolveStats(nodes=1)
    if not graph.live:
        return [], stats
    moves = root.moves(graph.live, start)
    loop = asyncio.get_running_loop()
    pool = ProcessPoolExecutor(max_workers=limits.workers)
    pending = {}
    try:
        pending = {
            loop.run_in_executor(pool, _solve_branch, graph, limits, mask, child): index
            for index, (_, mask, child) in enumerate(moves)
        }
        while pending:
            done, _ = await asyncio.wait(list(pending), return_when=asyncio.FIRST_COMPLETED)
            for fut in sorted(done, key=pending.get):
                index = pending.pop(fut)
                rest, branch_stats = fut.result()
                stats.merge(branch_stats)
                if rest is not None:
                    return [moves[index][0]] + rest, stats
        return None, stats
    finally:
        for fut in pending:
            fut.cancel()
        _stop_pool(pool)


def race_branches(graph: Graph, f: WeightMap, limits: SearchLimits) -> Tuple[Optional[List[Step]], SolveStats]:
    """Feasibility of budget f with the root moves searched in parallel."""
    return asyncio.run(_race(graph, f, limits))
