"""Pure-numpy window scans, used when numba is unavailable or disabled.

Windows of different lengths are stacked into one zero-padded array and
factorised with a single batched QR. Zero rows leave least-squares solutions
and residual sums unchanged, so only the effective ``nobs`` needs tracking.
The augmented column ``[X | y]`` gives the residual norm as the last diagonal
entry of R.
"""

import numpy as np

from .adf import FIT_TOL, RANK_TOL

_CHUNK_CELLS = 2_000_000


def _batch_tstats(p, starts, ends, lags, constant, trend):
    dp = np.diff(p)
    nobs = ends - starts - 1 - lags
    k = 1 + lags + int(constant) + int(trend)
    out = np.empty(starts.size)
    mmax = int(nobs.max()) if nobs.size else 0
    step = max(1, _CHUNK_CELLS // max(1, mmax * (k + 1)))
    r = np.arange(mmax)
    for lo in range(0, starts.size, step):
        s = starts[lo : lo + step]
        n = nobs[lo : lo + step]
        valid = r[None, :] < n[:, None]
        t = np.where(valid, s[:, None] + 1 + lags + r[None, :], lags + 1)
        M = np.zeros((s.size, mmax, k + 1))
        c = 0
        if constant:
            M[:, :, c] = 1.0
            c += 1
        if trend:
            M[:, :, c] = r + 1.0
            c += 1
        for i in range(1, lags + 1):
            M[:, :, c] = dp[t - 1 - i]
            c += 1
        M[:, :, c] = p[t - 1]
        M[:, :, c + 1] = dp[t - 1]
        M *= valid[:, :, None]

        norms = np.sqrt(np.einsum("bij,bij->bj", M, M))
        R = np.linalg.qr(M, mode="r")
        diag = np.abs(np.diagonal(R, axis1=1, axis2=2))
        singular = np.any((norms[:, :k] == 0) | (diag[:, :k] <= RANK_TOL * norms[:, :k]), axis=1)
        resid = diag[:, k]
        exact = resid <= FIT_TOL * norms[:, k]
        sigma = resid / np.sqrt(n - k)
        rkk = R[:, k - 1, k - 1]
        z = R[:, k - 1, k]
        with np.errstate(divide="ignore", invalid="ignore"):
            tstat = np.sign(rkk) * z / sigma
        tstat[singular | exact] = np.nan
        out[lo : lo + step] = tstat
    return out


def window_tstat(p, a, b, lags, constant, trend):
    return float(_batch_tstats(np.asarray(p, dtype=np.float64), np.array([a]), np.array([b]), lags, constant, trend)[0])


def prefix_scan(p, w, lags, constant, trend):
    p = np.asarray(p, dtype=np.float64)
    ends = np.arange(w, p.size + 1)
    out = _batch_tstats(p, np.zeros_like(ends), ends, lags, constant, trend)
    return out, int(np.isnan(out).sum())


def recursive_scan(p, w, lags, constant, trend):
    p = np.asarray(p, dtype=np.float64)
    T = p.size
    n_end = T - w + 1
    counts = np.arange(1, n_end + 1)
    ends = np.repeat(np.arange(w, T + 1), counts)
    offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
    starts = np.arange(ends.size) - np.repeat(offsets, counts)
    stats = _batch_tstats(p, starts, ends, lags, constant, trend)

    prefix = stats[offsets].copy()
    best = np.full(n_end, np.nan)
    arg = np.full(n_end, -1, dtype=np.int64)
    for e in range(n_end):
        seg = stats[offsets[e] : offsets[e] + counts[e]]
        if not np.all(np.isnan(seg)):
            j = int(np.nanargmax(seg))
            best[e] = seg[j]
            arg[e] = j
    return prefix, best, arg, int(np.isnan(stats).sum())


def null_sweep(paths, w, lags, constant, trend):
    R, T = paths.shape
    sadf = np.empty(R)
    gsadf = np.empty(R)
    bsadf = np.empty((R, T - w + 1))
    nbad = np.empty(R, dtype=np.int64)
    for i in range(R):
        prefix, best, _, nbad[i] = recursive_scan(paths[i], w, lags, constant, trend)
        sadf[i] = np.nanmax(prefix)
        gsadf[i] = np.nanmax(best)
        bsadf[i] = best
    return sadf, gsadf, bsadf, nbad


def prefix_sweep(paths, w, lags, constant, trend):
    return np.array([np.nanmax(prefix_scan(row, w, lags, constant, trend)[0]) for row in paths])
