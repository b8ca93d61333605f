"""Hot-loop kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time from the ``TSADVKIT_BACKEND``
environment variable:

* ``auto`` (default): numba if it imports, else numpy
* ``numba``: require the jit kernels, fail loudly if numba is missing
* ``numpy``: force the pure-numpy fallback

Both backends expose the same functions and agree within 1e-9; see
``benchmarks/bench_kernels.py`` for a speed comparison.
"""

from __future__ import annotations

import os

from . import numpy_backend

_CHOICE = os.environ.get("TSADVKIT_BACKEND", "auto").strip().lower()

if _CHOICE not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"TSADVKIT_BACKEND must be one of auto|numba|numpy, got {_CHOICE!r}"
    )

if _CHOICE == "numpy":
    _impl = numpy_backend
else:
    try:
        from . import numba_backend as _impl
    except ImportError:
        if _CHOICE == "numba":
            raise
        _impl = numpy_backend

dct_forward = _impl.dct_forward
dct_inverse = _impl.dct_inverse
subdist = _impl.subdist
subdist_batch = _impl.subdist_batch
dtw_sq_cost = _impl.dtw_sq_cost


def active_backend() -> str:
    """Name of the backend selected at import time."""
    return _impl.NAME
