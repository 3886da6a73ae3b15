"""Multi-cost directed graphs, problem instances and input formats.

Graphs are immutable after construction and safe to share between
concurrent searches.  Two text formats are supported:

* DIMACS ``.gr`` shortest-path files (one scalar weight per arc); two
  layers plus a degree-derived cost are combined by
  :func:`build_scenario_graph`.
* a small edge-list format for hand-made fixtures::

      <n>
      <m>
      <u> <v> <c1> ... <ck>      (one line per edge, 0-based ids)

Integer costs only.  The degree-based third scenario cost is stored as
outdeg(u) + outdeg(v) - twice the average of the two endpoint degrees -
so that every attribute stays integral.  Budgets derived through the
tightness formula are scale-covariant, so the doubled layer induces the
same feasible set as the averaged one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable

import numpy as np

from .vectors import INF, CostVector, validate

Arc = tuple[int, int, int]  # (from, to, scalar weight)
Edge = tuple[int, int, CostVector]


class Direction(enum.IntEnum):
    FORWARD = 0
    BACKWARD = 1

    @property
    def opposite(self) -> "Direction":
        return Direction(1 - self.value)


class GraphFormatError(ValueError):
    """Raised for malformed graph input files."""


class MultiCostGraph:
    """Directed graph whose edges carry k-component cost vectors.

    Forward and backward (edge-reversed) adjacency are precomputed; the
    backward graph is exactly the forward graph with every edge reversed
    and identical cost vectors.
    """

    def __init__(self, state_count: int, edges: Iterable[Edge]):
        self.state_count = int(state_count)
        self.edges: list[Edge] = []
        k = None
        fwd: list[list[tuple[int, CostVector]]] = [[] for _ in range(self.state_count)]
        bwd: list[list[tuple[int, CostVector]]] = [[] for _ in range(self.state_count)]
        for u, v, cost in edges:
            if not (0 <= u < self.state_count and 0 <= v < self.state_count):
                raise ValueError(f"edge ({u},{v}) endpoint out of range")
            cost = tuple(cost)
            if k is None:
                k = len(cost)
                validate(cost)
            else:
                validate(cost, k)
            self.edges.append((u, v, cost))
            fwd[u].append((v, cost))
            bwd[v].append((u, cost))
        if k is None:
            raise ValueError("graph has no edges; cost dimension is undefined")
        self.k = k
        self._adj = (fwd, bwd)
        self._csr: dict[Direction, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def adjacency(self, direction: Direction) -> list[list[tuple[int, CostVector]]]:
        """Successor lists of every state in the given search direction."""
        return self._adj[direction]

    def csr(self, direction: Direction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, targets, weights[m,k]) arrays for the direction's adjacency."""
        cached = self._csr.get(direction)
        if cached is not None:
            return cached
        adj = self._adj[direction]
        n = self.state_count
        indptr = np.zeros(n + 1, dtype=np.int64)
        for u in range(n):
            indptr[u + 1] = indptr[u] + len(adj[u])
        m = int(indptr[n])
        targets = np.empty(m, dtype=np.int64)
        weights = np.empty((m, self.k), dtype=np.int64)
        pos = 0
        for u in range(n):
            for v, cost in adj[u]:
                targets[pos] = v
                weights[pos] = cost
                pos += 1
        self._csr[direction] = (indptr, targets, weights)
        return self._csr[direction]

    def alive_adjacency(
        self, direction: Direction, alive: bytes | bytearray | None
    ) -> list[list[tuple[int, CostVector]]]:
        """Adjacency with edges into dead states dropped (dead sources keep empty lists)."""
        adj = self._adj[direction]
        if alive is None:
            return adj
        out: list[list[tuple[int, CostVector]]] = []
        for u in range(self.state_count):
            if alive[u]:
                out.append([(v, c) for v, c in adj[u] if alive[v]])
            else:
                out.append([])
        return out


@dataclass(frozen=True)
class ProblemInstance:
    """A point-to-point query: minimise cost 1 subject to resource limits."""

    graph: MultiCostGraph
    start: int
    goal: int
    limits: tuple[int, ...]

    def __post_init__(self):
        if not (0 <= self.start < self.graph.state_count):
            raise ValueError(f"start state {self.start} out of range")
        if not (0 <= self.goal < self.graph.state_count):
            raise ValueError(f"goal state {self.goal} out of range")
        object.__setattr__(self, "limits", tuple(int(r) for r in self.limits))
        if len(self.limits) != self.graph.k - 1:
            raise ValueError(
                f"expected {self.graph.k - 1} resource limits, got {len(self.limits)}"
            )
        if any(r < 0 for r in self.limits):
            raise ValueError("resource limits must be non-negative")

    @property
    def k(self) -> int:
        return self.graph.k

    def upper_bound(self) -> CostVector:
        """The global bound template (inf, R1, ..., R(k-1))."""
        return (INF, *self.limits)


@dataclass(frozen=True)
class TightnessSpec:
    """Per-resource path-cost bounds plus the interpolation factor delta.

    cost_min[i] / cost_max[i] bound resource i+2's consumption over
    start-goal paths (cost_max conventionally taken from the unconstrained
    cost1-optimal path).  delta is kept as an exact Fraction so budgets
    round deterministically.
    """

    delta: Fraction
    cost_min: tuple[int, ...]
    cost_max: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "delta", _as_fraction(self.delta))
        if not (0 <= self.delta <= 1):
            raise ValueError(f"delta must be in [0,1], got {self.delta}")
        if len(self.cost_min) != len(self.cost_max):
            raise ValueError("cost_min and cost_max must have equal length")
        for lo, hi in zip(self.cost_min, self.cost_max):
            if lo > hi:
                raise ValueError(f"cost_min {lo} exceeds cost_max {hi}")


def _as_fraction(delta) -> Fraction:
    if isinstance(delta, Fraction):
        return delta
    if isinstance(delta, int):
        return Fraction(delta)
    if isinstance(delta, float):
        # decimal reading of the literal, not the binary expansion
        return Fraction(str(delta))
    return Fraction(delta)


def compute_budget(spec: TightnessSpec, resource: int) -> int:
    """Budget for one resource: floor(cost_min + delta * (cost_max - cost_min)).

    ``resource`` is a 0-based index into the spec's bound tuples.  Floor
    rounding is conservative: it never admits a path the exact rational
    budget would reject.
    """
    lo = spec.cost_min[resource]
    hi = spec.cost_max[resource]
    d = spec.delta
    return lo + (d.numerator * (hi - lo)) // d.denominator


# ---------------------------------------------------------------------------
# DIMACS .gr ingestion


def load_dimacs_gr(stream: IO[str] | str) -> tuple[int, list[Arc]]:
    """Parse a DIMACS shortest-path ``.gr`` file.

    Returns (state_count, arcs) with vertex ids shifted to 0-based.  Arc
    order and parallel arcs are preserved.  Malformed input raises
    GraphFormatError naming the offending line.
    """
    if isinstance(stream, str):
        with open(stream, "r", encoding="ascii") as fh:
            return load_dimacs_gr(fh)

    n = m = None
    arcs: list[Arc] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: duplicate problem header")
            if len(fields) != 4 or fields[1] != "sp":
                raise GraphFormatError(f"line {lineno}: expected 'p sp <n> <m>'")
            try:
                n, m = int(fields[2]), int(fields[3])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer header counts") from None
            if n < 0 or m < 0:
                raise GraphFormatError(f"line {lineno}: negative header counts")
        elif fields[0] == "a":
            if n is None:
                raise GraphFormatError(f"line {lineno}: arc before problem header")
            if len(fields) != 4:
                raise GraphFormatError(f"line {lineno}: expected 'a <u> <v> <w>'")
            try:
                u, v, w = int(fields[1]), int(fields[2]), int(fields[3])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer arc fields") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"line {lineno}: vertex id outside [1,{n}]")
            if w < 0:
                raise GraphFormatError(f"line {lineno}: negative arc weight {w}")
            arcs.append((u - 1, v - 1, w))
        else:
            raise GraphFormatError(f"line {lineno}: unrecognised line {line[:30]!r}")
    if n is None:
        raise GraphFormatError("missing problem header 'p sp <n> <m>'")
    if len(arcs) != m:
        raise GraphFormatError(f"header announces {m} arcs, file has {len(arcs)}")
    return n, arcs


def dump_dimacs_layer(graph: MultiCostGraph, component: int) -> str:
    """Serialise one cost component of a graph back to DIMACS .gr text."""
    lines = [f"p sp {graph.state_count} {len(graph.edges)}"]
    for u, v, cost in graph.edges:
        lines.append(f"a {u + 1} {v + 1} {cost[component]}")
    return "\n".join(lines) + "\n"


def build_scenario_graph(
    distance: tuple[int, list[Arc]],
    time: tuple[int, list[Arc]],
    k: int,
) -> MultiCostGraph:
    """Combine distance and time DIMACS layers into a k-cost benchmark graph.

    Edge costs are (distance, time, degcost[, 1]) for k in {3, 4} where
    degcost(u,v) = outdeg(u) + outdeg(v).  The two layers must describe the
    same topology in the same arc order.
    """
    if k not in (3, 4):
        raise ValueError(f"scenario graphs support k in {{3,4}}, got {k}")
    n_d, arcs_d = distance
    n_t, arcs_t = time
    if n_d != n_t:
        raise GraphFormatError(f"layer state counts differ: {n_d} != {n_t}")
    if len(arcs_d) != len(arcs_t):
        raise GraphFormatError(f"layer arc counts differ: {len(arcs_d)} != {len(arcs_t)}")
    outdeg = [0] * n_d
    for u, _, _ in arcs_d:
        outdeg[u] += 1
    edges: list[Edge] = []
    for idx, ((ud, vd, wd), (ut, vt, wt)) in enumerate(zip(arcs_d, arcs_t)):
        if (ud, vd) != (ut, vt):
            raise GraphFormatError(f"arc {idx}: topology mismatch ({ud},{vd}) vs ({ut},{vt})")
        degcost = outdeg[ud] + outdeg[vd]
        cost = (wd, wt, degcost) if k == 3 else (wd, wt, degcost, 1)
        edges.append((ud, vd, cost))
    return MultiCostGraph(n_d, edges)


# ---------------------------------------------------------------------------
# Edge-list fixture format


def load_edge_list(stream: IO[str] | str) -> MultiCostGraph:
    """Read the <n>/<m>/one-edge-per-line fixture format."""
    if isinstance(stream, str):
        with open(stream, "r", encoding="ascii") as fh:
            return load_edge_list(fh)
    lines = [ln.strip() for ln in stream if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) < 2:
        raise GraphFormatError("edge list needs at least <n> and <m> lines")
    try:
        n = int(lines[0])
        m = int(lines[1])
    except ValueError:
        raise GraphFormatError("edge list header must be two integers") from None
    if len(lines) - 2 != m:
        raise GraphFormatError(f"edge list announces {m} edges, has {len(lines) - 2}")
    edges: list[Edge] = []
    for lineno, line in enumerate(lines[2:], start=3):
        fields = line.split()
        if len(fields) < 4:
            raise GraphFormatError(f"edge line {lineno}: need '<u> <v> <c1> ... <ck>'")
        try:
            nums = [int(f) for f in fields]
        except ValueError:
            raise GraphFormatError(f"edge line {lineno}: non-integer field") from None
        edges.append((nums[0], nums[1], tuple(nums[2:])))
    return MultiCostGraph(n, edges)


def dump_edge_list(graph: MultiCostGraph, stream: IO[str]) -> None:
    stream.write(f"{graph.state_count}\n{len(graph.edges)}\n")
    for u, v, cost in graph.edges:
        stream.write(f"{u} {v} " + " ".join(str(c) for c in cost) + "\n")
