"""Backend selection for the hot numeric kernels.

The jitted implementations are used by default.  Set WEYLCURV_NO_NUMBA=1
to force the pure-numpy fallback (also used when numba cannot be
imported).  Both backends implement identical algorithms; the benchmark
in benchmarks/bench_kernels.py compares them.
"""

from __future__ import annotations

import os

from . import _kernels_numpy

__all__ = ["BACKEND", "ascend_pairs", "rk4_velocity_path"]


def _numba_disabled() -> bool:
    return os.environ.get("WEYLCURV_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")


if _numba_disabled():
    _impl = _kernels_numpy
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_numba as _impl
        BACKEND = "numba"
    except ImportError:
        _impl = _kernels_numpy
        BACKEND = "numpy"

rk4_velocity_path = _impl.rk4_velocity_path
ascend_pairs = _impl.ascend_pairs
