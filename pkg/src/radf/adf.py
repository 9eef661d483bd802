"""Dickey-Fuller regression by OLS and its right-tailed t-ratio.

This is the straightforward reference path: one explicit design matrix and
one QR factorisation per call. The recursive scans in :mod:`radf.kernels`
compute the same statistic window by window without materialising designs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError, InputError, InsufficientObservationsError, SingularDesignError

# |R_jj| below this fraction of the column norm means the column is (numerically)
# a combination of the preceding ones.
RANK_TOL = 1e-10
# Residual norm below this fraction of ||y|| is treated as an exact fit.
FIT_TOL = 1e-10


@dataclass(frozen=True)
class AdfSpec:
    lags: int = 0
    constant: bool = True
    trend: bool = False

    def __post_init__(self):
        if int(self.lags) != self.lags or self.lags < 0:
            raise InputError(f"lags must be a non-negative integer, got {self.lags}")

    @property
    def n_regressors(self) -> int:
        return int(self.constant) + int(self.trend) + 1 + self.lags

    @property
    def min_window(self) -> int:
        """Smallest window length (in observations) that leaves a t-ratio defined."""
        det = int(self.constant) + int(self.trend)
        return max(self.lags + 4 + det, 2 * self.lags + det + 3)

    @property
    def tag(self) -> str:
        det = ("c" if self.constant else "n") + ("t" if self.trend else "")
        return f"l{self.lags}{det}"


@dataclass(frozen=True)
class AdfResult:
    t_stat: float
    coef: float
    stderr: float
    nobs: int
    residual_variance: float


def ols(y, X):
    """Least squares via Householder QR.

    Returns ``(coefs, stderrs, residual_variance)`` where the variance uses the
    ``n - k`` degrees-of-freedom divisor.
    """
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if n != y.size:
        raise ValueError(f"X has {n} rows but y has {y.size} entries")
    if n <= k:
        raise InsufficientObservationsError(f"need more rows than columns, got {n}x{k}")
    q, r = np.linalg.qr(X, mode="reduced")
    diag = np.abs(np.diag(r))
    colnorm = np.linalg.norm(X, axis=0)
    bad = (colnorm == 0) | (diag <= RANK_TOL * colnorm)
    if bad.any():
        raise SingularDesignError(f"design matrix is rank deficient (column {int(np.flatnonzero(bad)[0])})")
    coefs = np.linalg.solve(r, q.T @ y) if k > 1 else (q.T @ y) / r[0, 0]
    resid = y - X @ coefs
    s2 = float(resid @ resid) / (n - k)
    rinv = np.linalg.inv(r)
    stderrs = np.sqrt(s2 * np.sum(rinv * rinv, axis=1))
    return coefs, stderrs, s2


def adf_design(window, spec: AdfSpec = AdfSpec()):
    """Return ``(y, X, j)`` for the DF regression; ``j`` indexes the lagged level column."""
    p = np.asarray(window, dtype=np.float64).reshape(-1)
    m = p.size
    if m < spec.min_window:
        raise InsufficientObservationsError(
            f"window of {m} observations is too short for {spec} (need {spec.min_window})"
        )
    dp = np.diff(p)
    nobs = m - 1 - spec.lags
    rows = slice(spec.lags, m - 1)
    y = dp[rows]
    cols = []
    if spec.constant:
        cols.append(np.ones(nobs))
    if spec.trend:
        cols.append(np.arange(1, nobs + 1, dtype=np.float64))
    j = len(cols)
    cols.append(p[spec.lags : m - 1])
    for i in range(1, spec.lags + 1):
        cols.append(dp[spec.lags - i : m - 1 - i])
    return y, np.column_stack(cols), j


def adf_t_stat(window, spec: AdfSpec = AdfSpec()) -> AdfResult:
    """t-ratio on the lagged level in ``dp_t = a + (b - 1) p_{t-1} [+ trend] [+ lagged dp] + e_t``."""
    y, X, j = adf_design(window, spec)
    coefs, stderrs, s2 = ols(y, X)
    if s2 * (y.size - X.shape[1]) <= (FIT_TOL**2) * float(y @ y):
        raise DegenerateFitError("regression fits exactly; t-ratio is undefined")
    return AdfResult(
        t_stat=float(coefs[j] / stderrs[j]),
        coef=float(coefs[j]),
        stderr=float(stderrs[j]),
        nobs=y.size,
        residual_variance=s2,
    )
