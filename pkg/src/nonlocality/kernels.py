"""Backend selection for the polytope-projection solvers.

The compiled extension is used when present; setting NONLOCALITY_PURE_PYTHON=1
forces the NumPy implementation.  Both expose the same two functions with
identical semantics (see _kl_numpy for the contract).
"""

from __future__ import annotations

import os

from . import _kl_numpy

if os.environ.get("NONLOCALITY_PURE_PYTHON", "") == "1":
    _impl = _kl_numpy
    BACKEND = "numpy"
else:
    try:
        from . import _klcore as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kl_numpy
        BACKEND = "numpy"

solve_cg = _impl.solve_cg
solve_mw = _impl.solve_mw


def backend_name() -> str:
    """Which solver implementation is active: 'compiled' or 'numpy'."""
    return BACKEND
