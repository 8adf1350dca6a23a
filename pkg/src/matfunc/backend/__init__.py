"""Kernel backend selection.

The hot numerical loops (dense complex LU factorization, the triangular
solves, and the power-iteration spectral norm) exist twice: a compiled
Cython core and a pure-Python mirror with identical semantics.  The compiled
core is picked at import when available; set MATFUNC_BACKEND=python to force
the fallback (or =cython to insist on the compiled core and fail loudly).

benchmarks/bench_backends.py compares the two.
"""

from __future__ import annotations

import os

from . import pykernels

try:
    from . import _corekernels as compiled
except ImportError:  # extension not built; pure-Python fallback
    compiled = None


def _select():
    choice = os.environ.get("MATFUNC_BACKEND", "auto").strip().lower() or "auto"
    if choice in ("auto",):
        return (compiled, "cython") if compiled is not None else (pykernels, "python")
    if choice in ("cython", "compiled", "c"):
        if compiled is None:
            raise ImportError(
                "MATFUNC_BACKEND=%s requested but the compiled kernels are not built"
                % choice
            )
        return compiled, "cython"
    if choice in ("python", "py", "pure"):
        return pykernels, "python"
    raise ValueError("unknown MATFUNC_BACKEND value: %r" % choice)


_active, BACKEND = _select()

lu_factor = _active.lu_factor
lu_solve_factored = _active.lu_solve_factored
power_sigma = _active.power_sigma


def available() -> dict:
    """Backends importable in this environment, keyed by name."""
    out = {"python": pykernels}
    if compiled is not None:
        out["cython"] = compiled
    return out
