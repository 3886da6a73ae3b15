"""Cost-vector arithmetic and dominance tests.

A cost vector is a plain tuple of k non-negative integers.  Component 0 is
the primary cost to be minimised; components 1..k-1 are resources subject
to budget limits.  All comparisons and sums are element-wise.

The value ``INF`` is a distinguished infinity sentinel (the largest signed
64-bit integer, so compiled kernels and numpy buffers agree with the pure
Python code).  Additions saturate at INF and never wrap.
"""

from __future__ import annotations

CostVector = tuple[int, ...]

INF: int = 2**63 - 1


def zero(k: int) -> CostVector:
    """All-zero vector of length k."""
    return (0,) * k


def _check_pair(a: CostVector, b: CostVector) -> None:
    if len(a) != len(b):
        raise ValueError(f"cost vector length mismatch: {len(a)} != {len(b)}")


def validate(v: CostVector, k: int | None = None) -> CostVector:
    """Check non-negativity (and length, if k given); returns v unchanged."""
    if k is not None and len(v) != k:
        raise ValueError(f"cost vector has length {len(v)}, expected {k}")
    if len(v) < 2:
        raise ValueError("cost vectors need a primary cost and at least one resource")
    for c in v:
        if c < 0:
            raise ValueError(f"negative cost component in {v}")
    return v


def dominates(a: CostVector, b: CostVector) -> bool:
    """Weak dominance a <= b on every component (includes equality)."""
    _check_pair(a, b)
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def truncated_dominates(a: CostVector, b: CostVector) -> bool:
    """Weak dominance on the resource components only; the primary cost is ignored."""
    _check_pair(a, b)
    for i in range(1, len(a)):
        if a[i] > b[i]:
            return False
    return True


def add(a: CostVector, b: CostVector) -> CostVector:
    """Element-wise sum, saturating at INF."""
    _check_pair(a, b)
    return tuple(s if (s := x + y) < INF else INF for x, y in zip(a, b))


def sat_add(x: int, y: int) -> int:
    """Scalar saturating addition."""
    s = x + y
    return s if s < INF else INF


def fmt(v: CostVector) -> str:
    """Render a vector like (4,4,4), with inf for the sentinel."""
    return "(" + ",".join("inf" if c == INF else str(c) for c in v) + ")"
