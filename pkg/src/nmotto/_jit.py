"""Numba toggle for the hot numeric kernels.

Set NMOTTO_NUMBA=0 to force the pure-numpy fallback path.  Each hot kernel
is written twice (an njit-able scalar loop and a vectorised numpy version);
this module picks one at import time so the rest of the package stays
oblivious.  benchmarks/bench_numba.py compares the two paths.
"""

import os
import warnings

_flag = os.environ.get("NMOTTO_NUMBA", "1").strip().lower()
NUMBA_REQUESTED = _flag not in ("0", "false", "off", "no")

NUMBA_ENABLED = False
if NUMBA_REQUESTED:
    try:
        from numba import njit as _njit
        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        warnings.warn(
            "numba is not importable; falling back to pure-numpy kernels",
            RuntimeWarning,
            stacklevel=2,
        )


def compile_kernel(loop_impl, numpy_impl=None):
    """Return the jitted loop implementation, or the numpy fallback.

    `loop_impl` must be nopython-compilable.  When `numpy_impl` is omitted
    the plain-python loop doubles as the fallback (used only for cold paths).
    """
    if NUMBA_ENABLED:
        return _njit(cache=True)(loop_impl)
    return numpy_impl if numpy_impl is not None else loop_impl
