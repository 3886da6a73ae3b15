"""Per-state explored-label storage and the dominance machinery.

Each direction of the enhanced search owns one :class:`FrontierStore`.
For every state it keeps two lists:

* ``X`` - labels whose truncated g-vectors form an antichain, in insertion
  order (which is non-decreasing in the primary cost, because extraction
  is ordered by f1 and the heuristic is fixed per state);
* ``X_Dom`` - labels demoted from X because a later label truncated-
  dominates them.  They are dead for pruning purposes but must stay
  reachable for path matching by the opposite direction.  X_Dom is kept
  sorted lexicographically by truncated vector (the order is otherwise
  free).

A label is published to the opposite direction only once its insert
completes; under the parallel runtime all mutations of one direction's
store happen under that direction's lock and readers take snapshots.
"""

from __future__ import annotations

import bisect

from . import kernels
from .vectors import CostVector


class LabelArena:
    """Pool of frontier labels for one direction, addressed by handle.

    Only labels that enter a frontier get pooled; queue entries carry
    their g-vector and parent handle inline until then.  Parent chains
    therefore always point at pooled labels.
    """

    __slots__ = ("g", "state", "parent")

    def __init__(self):
        self.g: list[CostVector] = []
        self.state: list[int] = []
        self.parent: list[int] = []

    def add(self, state: int, g: CostVector, parent: int) -> int:
        handle = len(self.g)
        self.g.append(g)
        self.state.append(state)
        self.parent.append(parent)
        return handle

    def chain(self, handle: int) -> list[int]:
        """State sequence from the pool root out to ``handle``."""
        states = []
        h = handle
        while h >= 0:
            states.append(self.state[h])
            h = self.parent[h]
        states.reverse()
        return states


class FrontierStore:
    """X / X_Dom lists for every state of one search direction."""

    __slots__ = ("x_handles", "x_gs", "dom_handles", "dom_gs")

    def __init__(self, state_count: int):
        self.x_handles: list[list[int] | None] = [None] * state_count
        self.x_gs: list[list[CostVector] | None] = [None] * state_count
        self.dom_handles: list[list[int] | None] = [None] * state_count
        self.dom_gs: list[list[CostVector] | None] = [None] * state_count

    def quick_dominated(self, state: int, g: CostVector) -> bool:
        """Check g against the most recently inserted label only."""
        gs = self.x_gs[state]
        return bool(gs) and kernels.tr_last_dominates(gs, g)

    def dominated(self, state: int, g: CostVector) -> bool:
        """Full scan of X; true iff some member truncated-dominates g."""
        gs = self.x_gs[state]
        return bool(gs) and kernels.tr_any_dominates(gs, g)

    def insert(self, state: int, handle: int, g: CostVector) -> int:
        """Demote members g truncated-dominates, then append g to X.

        Caller must have established that g is not dominated.  Returns the
        number of demoted labels.  Insertion order stays non-decreasing in
        the primary cost; violating that indicates a broken extraction
        order upstream.
        """
        gs = self.x_gs[state]
        if gs is None:
            self.x_handles[state] = [handle]
            self.x_gs[state] = [g]
            return 0
        assert not gs or gs[-1][0] <= g[0], "insertion must be g1-monotone"
        demoted = kernels.tr_dominated_indices(gs, g)
        if demoted:
            handles = self.x_handles[state]
            dom_gs = self.dom_gs[state]
            if dom_gs is None:
                dom_gs = self.dom_gs[state] = []
                self.dom_handles[state] = []
            dom_handles = self.dom_handles[state]
            for idx in demoted:
                moved_g = gs[idx]
                key = (moved_g[1:], moved_g[0])
                at = bisect.bisect_left(
                    dom_gs, key, key=lambda v: (v[1:], v[0])
                )
                dom_gs.insert(at, moved_g)
                dom_handles.insert(at, handles[idx])
            drop = set(demoted)
            self.x_gs[state] = gs = [v for i, v in enumerate(gs) if i not in drop]
            self.x_handles[state] = handles = [
                h for i, h in enumerate(handles) if i not in drop
            ]
            gs.append(g)
            handles.append(handle)
        else:
            gs.append(g)
            self.x_handles[state].append(handle)
        return len(demoted)

    def touched_states(self):
        for state, gs in enumerate(self.x_gs):
            if gs:
                yield state


# Spec-level operation aliases working on bare label data -------------------


def is_dominated(g: CostVector, explored: list[CostVector]) -> bool:
    """True iff some explored g-vector truncated-dominates g (weak dominance)."""
    return kernels.tr_any_dominates(explored, g)


def quick_check(g: CostVector, store: FrontierStore, state: int) -> bool:
    """Subsumption test against the last explored label of the state."""
    return store.quick_dominated(state, g)


def insert_nondominated(g: CostVector, store: FrontierStore, state: int, handle: int = -1) -> None:
    assert not store.dominated(state, g), "insert requires a non-dominated label"
    store.insert(state, handle, g)


def validate_store(store: FrontierStore) -> None:
    """Debug validator for the frontier invariants.

    Checks, per state: X is a truncated-dominance antichain; every demoted
    label is truncated-dominated by some X member; no two stored labels
    carry identical g-vectors; X insertion order is g1-monotone.  Raises
    AssertionError on the first violation.
    """
    for state, gs in enumerate(store.x_gs):
        if not gs:
            continue
        for i in range(1, len(gs)):
            assert gs[i - 1][0] <= gs[i][0], f"state {state}: X not g1-monotone"
        for i, a in enumerate(gs):
            assert not (
                kernels.tr_any_dominates(gs[:i], a)
                or kernels.tr_any_dominates(gs[i + 1 :], a)
            ), f"state {state}: X not an antichain at {a}"
        dom = store.dom_gs[state] or []
        for d in dom:
            assert kernels.tr_any_dominates(gs, d), f"state {state}: uncovered demoted label {d}"
        seen = set(gs)
        assert len(seen) == len(gs), f"state {state}: duplicate vector in X"
        for v in dom:
            assert v not in seen, f"state {state}: duplicate stored vector {v}"
            seen.add(v)
        assert len(seen) == len(gs) + len(dom), f"state {state}: duplicate vector in X_Dom"
