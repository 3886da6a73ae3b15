"""Kernel backend selection.

The hot inner-loop primitives (dominance scans, child generation, the
one-to-all shortest path) exist twice: a compiled Cython extension
(_ckern) and a pure-Python fallback (_pykern) with identical semantics.
The compiled backend is preferred when importable; set RCSP_PURE_PYTHON=1
to force the fallback.  ``rcsp backend-bench`` times the two against each
other on a synthetic workload.
"""

from __future__ import annotations

import os

from . import _pykern

if os.environ.get("RCSP_PURE_PYTHON"):
    _impl = _pykern
    COMPILED = False
else:
    try:
        from . import _ckern as _impl  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        _impl = _pykern
        COMPILED = False

BACKEND = "compiled" if COMPILED else "pure-python"

_NAMES = (
    "tr_any_dominates",
    "tr_last_dominates",
    "tr_dominated_indices",
    "match_scan",
    "expand_enhanced",
    "expand_baseline",
    "dijkstra_csr",
)


def use(backend: str) -> None:
    """Rebind the kernel functions to one backend at runtime.

    All call sites resolve kernels.<fn> at call time, so this switches the
    whole package.  Raises if the compiled backend was requested but is
    not importable.
    """
    global BACKEND
    if backend == "pure-python":
        impl = _pykern
    elif backend == "compiled":
        if not COMPILED:
            raise RuntimeError("compiled kernel extension is not available")
        from . import _ckern as impl  # type: ignore[no-redef]
    else:
        raise ValueError(f"unknown backend {backend!r}")
    g = globals()
    for name in _NAMES:
        g[name] = getattr(impl, name)
    BACKEND = backend


use(BACKEND)
