"""JIT-compiled window scans.

Every window regression is solved with an in-place Householder QR on a
scratch design whose last column is the lagged level. With that ordering the
t-ratio of the level coefficient is ``sign(R_kk) * (Q'y)_k / sigma`` and no
back-substitution is needed.
"""

import os

import numba
import numpy as np
from numba import njit, prange

from .adf import FIT_TOL, RANK_TOL

# Older system TBB builds make numba warn on every parallel launch.
if "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ and "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]


@njit(cache=True)
def _fill(p, a, b, lags, constant, trend, A, y):
    nobs = b - a - 1 - lags
    k = 0
    if constant:
        for r in range(nobs):
            A[r, k] = 1.0
        k += 1
    if trend:
        for r in range(nobs):
            A[r, k] = r + 1.0
        k += 1
    for i in range(1, lags + 1):
        for r in range(nobs):
            t = a + 1 + lags + r
            A[r, k] = p[t - i] - p[t - i - 1]
        k += 1
    for r in range(nobs):
        t = a + 1 + lags + r
        A[r, k] = p[t - 1]
        y[r] = p[t] - p[t - 1]
    return nobs, k + 1


@njit(cache=True)
def window_tstat(p, a, b, lags, constant, trend, A, y, colnorm):
    """t-ratio for the window ``p[a:b]``; NaN when singular or an exact fit."""
    n, k = _fill(p, a, b, lags, constant, trend, A, y)
    ynorm2 = 0.0
    for r in range(n):
        ynorm2 += y[r] * y[r]
    for j in range(k):
        s = 0.0
        for r in range(n):
            s += A[r, j] * A[r, j]
        colnorm[j] = np.sqrt(s)
    for j in range(k):
        s = 0.0
        for r in range(j, n):
            s += A[r, j] * A[r, j]
        norm = np.sqrt(s)
        if colnorm[j] == 0.0 or norm <= RANK_TOL * colnorm[j]:
            return np.nan
        alpha = -norm if A[j, j] >= 0.0 else norm
        # v = A[j:, j] - alpha e_1, stored in place
        A[j, j] -= alpha
        vnorm2 = s - 2.0 * alpha * (A[j, j] + alpha) + alpha * alpha
        for c in range(j + 1, k):
            d = 0.0
            for r in range(j, n):
                d += A[r, j] * A[r, c]
            f = 2.0 * d / vnorm2
            for r in range(j, n):
                A[r, c] -= f * A[r, j]
        d = 0.0
        for r in range(j, n):
            d += A[r, j] * y[r]
        f = 2.0 * d / vnorm2
        for r in range(j, n):
            y[r] -= f * A[r, j]
        A[j, j] = alpha
    ssr = 0.0
    for r in range(k, n):
        ssr += y[r] * y[r]
    if ssr <= FIT_TOL * FIT_TOL * ynorm2:
        return np.nan
    sigma = np.sqrt(ssr / (n - k))
    rkk = A[k - 1, k - 1]
    z = y[k - 1]
    return z / sigma if rkk > 0.0 else -z / sigma


@njit(cache=True)
def _scratch(T, lags, constant, trend):
    k = 1 + lags + (1 if constant else 0) + (1 if trend else 0)
    return np.empty((T, k)), np.empty(T), np.empty(k)


@njit(cache=True)
def prefix_scan(p, w, lags, constant, trend):
    """ADF statistic on every prefix ``p[0:t2]``, ``t2 = w..T``."""
    T = p.shape[0]
    A, y, cn = _scratch(T, lags, constant, trend)
    out = np.empty(T - w + 1)
    bad = 0
    for e in range(T - w + 1):
        out[e] = window_tstat(p, 0, w + e, lags, constant, trend, A, y, cn)
        if np.isnan(out[e]):
            bad += 1
    return out, bad


@njit(cache=True)
def recursive_scan(p, w, lags, constant, trend):
    """Backward sup for every endpoint, plus the prefix-window statistic.

    Returns ``(prefix, bsadf, argmax_t1, n_bad)``; endpoints whose windows are
    all degenerate get NaN and ``argmax_t1 = -1``.
    """
    T = p.shape[0]
    A, y, cn = _scratch(T, lags, constant, trend)
    n_end = T - w + 1
    prefix = np.empty(n_end)
    best = np.empty(n_end)
    arg = np.empty(n_end, dtype=np.int64)
    bad = 0
    for e in range(n_end):
        t2 = w + e
        top = np.nan
        top_t1 = -1
        for t1 in range(t2 - w + 1):
            v = window_tstat(p, t1, t2, lags, constant, trend, A, y, cn)
            if t1 == 0:
                prefix[e] = v
            if np.isnan(v):
                bad += 1
            elif top_t1 < 0 or v > top:
                top = v
                top_t1 = t1
        best[e] = top
        arg[e] = top_t1
    return prefix, best, arg, bad


@njit(cache=True, parallel=True)
def null_sweep(paths, w, lags, constant, trend):
    """Run :func:`recursive_scan` on each row; returns ``(sadf, gsadf, bsadf, n_bad)``."""
    R, T = paths.shape
    n_end = T - w + 1
    sadf = np.empty(R)
    gsadf = np.empty(R)
    bsadf = np.empty((R, n_end))
    nbad = np.empty(R, dtype=np.int64)
    for i in prange(R):
        prefix, best, _, b = recursive_scan(paths[i], w, lags, constant, trend)
        sadf[i] = np.nanmax(prefix)
        gsadf[i] = np.nanmax(best)
        bsadf[i, :] = best
        nbad[i] = b
    return sadf, gsadf, bsadf, nbad


@njit(cache=True, parallel=True)
def prefix_sweep(paths, w, lags, constant, trend):
    """SADF statistic of each row."""
    R = paths.shape[0]
    out = np.empty(R)
    for i in prange(R):
        stats, _ = prefix_scan(paths[i], w, lags, constant, trend)
        out[i] = np.nanmax(stats)
    return out
