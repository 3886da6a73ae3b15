"""Enhanced bidirectional constrained A* (RCEBDA*).

Differences from the baseline solver:

* dominance checks are lazy - deferred from generation to extraction -
  with a cheap "last explored label" subsumption test run first, both at
  extraction and while generating children;
* each state's explored labels live in two lists (see frontier): the
  antichain X and the demoted X_Dom, so dominance scans stay short while
  demoted labels remain available for path matching;
* matching collects every node pair realizing a resource-unique
  non-dominated optimal path, in two stages: the demoted list is scanned
  only when some join with the main list was within the resource bounds
  (otherwise demoted joins, being resource-dominated, cannot fit either);
* termination is strict (f1 > best known cost), so all equal-cost optimal
  solutions are enumerated before stopping;
* parent references support full path reconstruction.

The per-direction loop lives in :class:`DirectionEngine` so the parallel
runtime can drive one engine per worker against the same shared state;
the sequential solver here interleaves the two engines by smallest front
f1, preferring forward on ties.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field
from heapq import heappop, heappush
from typing import Callable, NamedTuple

from . import kernels
from .baseline import TIMEOUT_CHECK_INTERVAL, SearchConfig
from .bounds import InitResult, initialize
from .frontier import FrontierStore, LabelArena
from .graph import Direction, ProblemInstance
from .status import SearchStats, SolveStatus
from .vectors import INF, CostVector, add

DIR_NAMES = ("forward", "backward")


class TraceEvent(NamedTuple):
    """One extraction processed by the search (emitted after the iteration)."""

    iteration: int
    direction: str
    state: int
    g: CostVector
    f: CostVector
    action: str  # pruned-quick | pruned-dominated | expanded | perimeter-blocked
    fbar1: int
    n_solutions: int


class SolutionSet:
    """Best primary cost plus the node pairs realizing it.

    Every stored pair joins to the same primary cost f1; the joined
    vectors are pairwise incomparable under truncated dominance and all
    fit the resource limits.
    """

    def __init__(self, f1: int, pairs: list[tuple[int, int, CostVector]], arenas):
        self.f1 = f1
        self._entries = pairs
        self._arenas = arenas

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(fh, bh) for fh, bh, _ in self._entries]

    def vectors(self) -> set[CostVector]:
        return {j for _, _, j in self._entries}

    def __len__(self) -> int:
        return len(self._entries)


@dataclass
class EnhancedResult:
    status: SolveStatus
    solutions: SolutionSet
    stats: SearchStats
    init: InitResult
    stores: tuple[FrontierStore, FrontierStore] = field(repr=False, default=None)


class SharedState:
    """Everything both directions read or write during a solve."""

    __slots__ = ("fbar", "stores", "arenas", "sols", "locks", "timed_out", "iterations")

    def __init__(self, problem: ProblemInstance, parallel: bool):
        n = problem.graph.state_count
        self.fbar = [INF, *problem.limits]
        self.stores = (FrontierStore(n), FrontierStore(n))
        self.arenas = (LabelArena(), LabelArena())
        self.sols: list[tuple[int, int, CostVector]] = []
        self.timed_out = False
        self.iterations = 0
        if parallel:
            import threading

            self.locks = (threading.Lock(), threading.Lock(), threading.Lock())
        else:
            self.locks = None


class DirectionEngine:
    """One direction's queue and iteration body against shared state."""

    def __init__(
        self,
        d: Direction,
        problem: ProblemInstance,
        shared: SharedState,
        init: InitResult,
        config: SearchConfig,
        deadline: float | None,
        trace: Callable[[TraceEvent], None] | None = None,
    ):
        self.d = int(d)
        self.shared = shared
        self.store = shared.stores[self.d]
        self.arena = shared.arenas[self.d]
        self.h = init.hf if self.d == 0 else init.hb
        self.adj = problem.graph.alive_adjacency(Direction(self.d), init.alive)
        self.ki = config.kappa_index(problem.graph.k)
        self.deadline = deadline
        self.trace = trace
        self.stats = None  # wired by the solver
        self.queue: list = []
        self.seq = 0
        self.prev_f1 = 0
        self.countdown = TIMEOUT_CHECK_INTERVAL
        root = problem.start if self.d == 0 else problem.goal
        zero = (0,) * problem.graph.k
        heappush(self.queue, (self.h[root][0], 0, root, 0, zero, -1))
        self.seq = 1

    def front_f1(self):
        return self.queue[0][0] if self.queue else None

    def step(self) -> bool:
        """Process one extraction; False once this direction should stop."""
        shared = self.shared
        if shared.timed_out:
            return False
        f1, _, state, _, g, parent = heappop(self.queue)
        if f1 > shared.fbar[0]:
            return False
        assert self.prev_f1 <= f1, "extraction order must be f1-monotone"
        self.prev_f1 = f1
        ds = self.stats
        ds.extracted += 1
        shared.iterations += 1

        self.countdown -= 1
        if self.countdown == 0:
            self.countdown = TIMEOUT_CHECK_INTERVAL
            if self.deadline is not None and _time.perf_counter() > self.deadline:
                shared.timed_out = True
                return False

        store = self.store
        gs = store.x_gs[state]
        if gs:
            if kernels.tr_last_dominates(gs, g):
                ds.pruned_quick += 1
                self._emit(state, g, "pruned-quick")
                return True
            ds.dominance_checks += 1
            if kernels.tr_any_dominates(gs, g):
                ds.pruned_dominated += 1
                self._emit(state, g, "pruned-dominated")
                return True

        handle = self.arena.add(state, g, parent)
        locks = shared.locks
        if locks is None:
            store.insert(state, handle, g)
        else:
            with locks[self.d]:
                store.insert(state, handle, g)

        self._match(state, handle, g)

        fbar = shared.fbar
        if 2 * g[self.ki] <= fbar[self.ki]:
            children, n_bound, n_quick = kernels.expand_enhanced(
                self.adj[state], g, self.h, tuple(fbar), store.x_gs
            )
            ds.expanded += 1
            ds.pruned_bound += n_bound
            ds.pruned_quick += n_quick
            q = self.queue
            seq = self.seq
            for t, gc, fc in children:
                heappush(q, (fc[0], -gc[0], t, seq, gc, handle))
                seq += 1
            self.seq = seq
            ds.generated += len(children)
            self._emit(state, g, "expanded")
        else:
            self._emit(state, g, "perimeter-blocked")
        return True

    def _match(self, state: int, handle: int, g: CostVector) -> None:
        """Join g with the opposite direction's labels at this state."""
        shared = self.shared
        opp = shared.stores[1 - self.d]
        locks = shared.locks
        if locks is None:
            xs_gs = opp.x_gs[state]
            xs_handles = opp.x_handles[state]
            dom_gs = opp.dom_gs[state]
            dom_handles = opp.dom_handles[state]
        else:
            with locks[1 - self.d]:
                xs_gs = opp.x_gs[state]
                xs_gs = list(xs_gs) if xs_gs else None
                xs_handles = opp.x_handles[state]
                xs_handles = list(xs_handles) if xs_handles else None
                dom_gs = opp.dom_gs[state]
                dom_gs = list(dom_gs) if dom_gs else None
                dom_handles = opp.dom_handles[state]
                dom_handles = list(dom_handles) if dom_handles else None
        if not xs_gs:
            return
        ds = self.stats
        fbar_t = tuple(shared.fbar)
        ds.matches += len(xs_gs)
        any_tr, inbound = kernels.match_scan(xs_gs, g, fbar_t)
        if inbound:
            self._record(g, handle, xs_gs, xs_handles, inbound)
        # demoted labels are resource-dominated by some main-list label, so
        # when no main-list join fits the resource bounds none of theirs can
        if any_tr and dom_gs:
            ds.matches += len(dom_gs)
            _, inbound = kernels.match_scan(dom_gs, g, fbar_t)
            if inbound:
                self._record(g, handle, dom_gs, dom_handles, inbound)

    def _record(self, g, handle, opp_gs, opp_handles, inbound) -> None:
        shared = self.shared
        locks = shared.locks
        sols = shared.sols
        fbar = shared.fbar
        for idx in inbound:
            j = add(g, opp_gs[idx])
            pair = (
                (handle, opp_handles[idx]) if self.d == 0 else (opp_handles[idx], handle)
            )
            if locks is None:
                self._filter_into_sols(sols, fbar, pair, j)
            else:
                with locks[2]:
                    self._filter_into_sols(sols, fbar, pair, j)

    @staticmethod
    def _filter_into_sols(sols, fbar, pair, j) -> None:
        if j[0] > fbar[0]:  # bound may have improved since the scan
            return
        if j[0] < fbar[0]:
            fbar[0] = j[0]
            sols.clear()
        k = len(j)
        dominated = False
        i = 0
        while i < len(sols):
            sj = sols[i][2]
            if _tr_le(sj, j, k):
                dominated = True
                break
            if _tr_le(j, sj, k):
                del sols[i]
                continue
            i += 1
        if not dominated:
            sols.append((pair[0], pair[1], j))

    def _emit(self, state: int, g: CostVector, action: str) -> None:
        if self.trace is None:
            return
        shared = self.shared
        f = add(g, self.h[state])
        self.trace(
            TraceEvent(
                shared.iterations,
                DIR_NAMES[self.d],
                state,
                g,
                f,
                action,
                shared.fbar[0],
                len(shared.sols),
            )
        )


def _tr_le(a, b, k) -> bool:
    for i in range(1, k):
        if a[i] > b[i]:
            return False
    return True


def solve_rcebda(
    problem: ProblemInstance,
    config: SearchConfig | None = None,
    trace: Callable[[TraceEvent], None] | None = None,
    init: InitResult | None = None,
) -> EnhancedResult:
    """All resource-unique non-dominated optimal node pairs of the instance.

    Runs the reducing initialization internally unless ``init`` is given.
    """
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
    shared = SharedState(problem, parallel=False)
    engines = tuple(
        DirectionEngine(Direction(d), problem, shared, init, config, deadline, trace)
        for d in (0, 1)
    )
    engines[0].stats = stats.fwd
    engines[1].stats = stats.bwd
    stats.fwd.generated += 1
    stats.bwd.generated += 1

    fwd_first = config.forward_first
    while True:
        f0 = engines[0].front_f1()
        f1 = engines[1].front_f1()
        if f0 is None and f1 is None:
            break
        if f1 is None:
            d = 0
        elif f0 is None:
            d = 1
        elif f0 == f1:
            d = 0 if fwd_first else 1
        else:
            d = 0 if f0 < f1 else 1
        if not engines[d].step():
            break

    stats.elapsed_ms = (_time.perf_counter() - t0) * 1000
    solutions = SolutionSet(shared.fbar[0], list(shared.sols), shared.arenas)
    if shared.timed_out:
        status = SolveStatus.TIMEOUT
    elif solutions:
        status = SolveStatus.OPTIMAL
    else:
        status = SolveStatus.INFEASIBLE
    return EnhancedResult(status, solutions, stats, init, shared.stores)


def match(
    g: CostVector,
    x_opp: list[CostVector],
    x_dom_opp: list[CostVector],
    sols: list[tuple[int, int, CostVector]],
    fbar: list[int],
) -> None:
    """Two-stage matching of one label against opposite-direction lists.

    Operates on bare g-vectors (pair handles are stored as -1); exposed
    for direct testing of the matching rules.  ``fbar`` is mutated in
    place like the solver's shared bound.
    """
    fbar_t = tuple(fbar)
    any_tr, inbound = kernels.match_scan(x_opp, g, fbar_t)
    for idx in inbound:
        DirectionEngine._filter_into_sols(sols, fbar, (-1, -1), add(g, x_opp[idx]))
    if any_tr and x_dom_opp:
        _, inbound = kernels.match_scan(x_dom_opp, g, fbar_t)
        for idx in inbound:
            DirectionEngine._filter_into_sols(sols, fbar, (-1, -1), add(g, x_dom_opp[idx]))


def reconstruct_paths(
    result: EnhancedResult, problem: ProblemInstance
) -> list[tuple[list[int], CostVector]]:
    """Start-goal state sequences (and joined costs) for every solution pair.

    The meeting state appears once; the joined cost is g(x) + g(y) for the
    pair's labels.
    """
    sols = result.solutions
    fwd_arena, bwd_arena = sols._arenas
    out = []
    for fh, bh, joined in sols._entries:
        fwd_states = fwd_arena.chain(fh)  # start .. meeting state
        bwd_states = bwd_arena.chain(bh)  # goal .. meeting state
        if fwd_states[-1] != bwd_states[-1]:
            raise RuntimeError("solution pair does not meet at a shared state")
        path = fwd_states + bwd_states[-2::-1]
        out.append((path, joined))
    return out
