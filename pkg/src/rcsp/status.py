"""Result status and search statistics shared by all solvers."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class SolveStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    TIMEOUT = "Timeout"


@dataclass
class DirectionStats:
    extracted: int = 0
    expanded: int = 0
    generated: int = 0
    dominance_checks: int = 0
    matches: int = 0
    pruned_bound: int = 0
    pruned_dominated: int = 0
    pruned_quick: int = 0


@dataclass
class SearchStats:
    fwd: DirectionStats = field(default_factory=DirectionStats)
    bwd: DirectionStats = field(default_factory=DirectionStats)
    elapsed_ms: float = 0.0

    def of(self, direction) -> DirectionStats:
        return self.fwd if direction == 0 else self.bwd

    def as_dict(self) -> dict:
        return {
            "elapsed_ms": round(self.elapsed_ms, 3),
            "fwd": vars(self.fwd).copy(),
            "bwd": vars(self.bwd).copy(),
        }
