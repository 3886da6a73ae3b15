"""Two-worker concurrent variant of the enhanced search.

One thread per direction, each running its direction's loop independently
over its own queue.  Shared between the workers: the upper bound (first
component of the shared fbar list), both frontier stores, and the
solution set.  A worker publishing a label makes it visible to the other
direction's matching only after the insert completes: all store mutations
happen under the owning direction's lock and matching snapshots the
opposite store under that same lock.  Solution-set mutations (rare) are
serialized under a third lock; stale reads of the upper bound are safe
because they only weaken pruning.

The run ends when both workers have exited, through their own termination
test or queue exhaustion.  The result contract equals the sequential
solver's: same status, same optimal cost, same joined-vector set; only
pair discovery order and statistics may differ between runs.
"""

from __future__ import annotations

import threading
import time as _time

from .baseline import SearchConfig
from .bounds import InitResult, initialize
from .enhanced import DirectionEngine, EnhancedResult, SharedState, SolutionSet
from .frontier import LabelArena
from .graph import Direction, ProblemInstance
from .status import SearchStats, SolveStatus
from .vectors import INF


def solve_parallel(
    problem: ProblemInstance,
    config: SearchConfig | None = None,
    init: InitResult | None = None,
) -> EnhancedResult:
    """Concurrent solve; result contract identical to the sequential variant."""
    config = config or SearchConfig()
    t0 = _time.perf_counter()
    stats = SearchStats()
    if init is None:
        init = initialize(problem)
    if not init.feasible:
        stats.elapsed_ms = (_time.perf_counter() - t0) * 1000
        empty = SolutionSet(INF, [], (LabelArena(), LabelArena()))
        return EnhancedResult(SolveStatus.INFEASIBLE, empty, stats, init, None)

    deadline = None if config.timeout is None else t0 + config.timeout
    shared = SharedState(problem, parallel=True)
    engines = tuple(
        DirectionEngine(Direction(d), problem, shared, init, config, deadline)
        for d in (0, 1)
    )
    engines[0].stats = stats.fwd
    engines[1].stats = stats.bwd
    stats.fwd.generated += 1
    stats.bwd.generated += 1

    def run(engine: DirectionEngine) -> None:
        while engine.queue:
            if not engine.step():
                break

    threads = [threading.Thread(target=run, args=(e,), daemon=True) for e in engines]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    stats.elapsed_ms = (_time.perf_counter() - t0) * 1000
    solutions = SolutionSet(shared.fbar[0], list(shared.sols), shared.arenas)
    if shared.timed_out:
        status = SolveStatus.TIMEOUT
    elif solutions:
        status = SolveStatus.OPTIMAL
    else:
        status = SolveStatus.INFEASIBLE
    return EnhancedResult(status, solutions, stats, init, shared.stores)
