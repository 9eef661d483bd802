"""Backend selection for the window scans.

The numba implementation is used unless ``RADF_DISABLE_NUMBA`` is set to a
truthy value or numba cannot be imported; the pure-numpy implementation
produces the same statistics to rounding. Both modules stay importable so
tests and benchmarks can compare them directly.
"""

import logging
import os

import numpy as np

from . import _kernels_numpy as numpy_backend

log = logging.getLogger(__name__)

_disabled = os.environ.get("RADF_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    from . import _kernels_numba as numba_backend
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_backend = None

if numba_backend is not None and not _disabled:
    BACKEND = "numba"
    _impl = numba_backend
else:
    BACKEND = "numpy"
    _impl = numpy_backend
log.debug("window scans use the %s backend", BACKEND)


def _prep(p):
    return np.ascontiguousarray(p, dtype=np.float64)


def window_tstat(p, a, b, lags=0, constant=True, trend=False):
    p = _prep(p)
    if _impl is numpy_backend:
        return numpy_backend.window_tstat(p, a, b, lags, constant, trend)
    k = 1 + lags + int(constant) + int(trend)
    return float(numba_backend.window_tstat(p, a, b, lags, constant, trend, np.empty((p.size, k)), np.empty(p.size), np.empty(k)))


def prefix_scan(p, w, lags=0, constant=True, trend=False):
    return _impl.prefix_scan(_prep(p), w, lags, constant, trend)


def recursive_scan(p, w, lags=0, constant=True, trend=False):
    return _impl.recursive_scan(_prep(p), w, lags, constant, trend)


def null_sweep(paths, w, lags=0, constant=True, trend=False):
    return _impl.null_sweep(np.ascontiguousarray(paths, dtype=np.float64), w, lags, constant, trend)


def prefix_sweep(paths, w, lags=0, constant=True, trend=False):
    return _impl.prefix_sweep(np.ascontiguousarray(paths, dtype=np.float64), w, lags, constant, trend)
