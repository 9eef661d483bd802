"""Recursive right-tailed statistics (SADF, GSADF, BSADF) and episode dating.

Windows are half-open index ranges ``[t1, t2)`` over the sample, so an
endpoint ``t2`` means "the first ``t2`` observations". Endpoints run from
``min_window_obs`` to ``T``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import kernels
from .adf import AdfSpec, adf_t_stat
from .errors import AlignmentError, InfeasibleError, InputError, InsufficientObservationsError, NoValidWindowError
from .series import FractionalWindow, Month, Series

log = logging.getLogger(__name__)

DEFAULT_MIN_WINDOW = 12


@dataclass(frozen=True, eq=False)
class StatSequence:
    """Statistic per endpoint, with the start index of the window that attained it."""

    kind: str  # "SADF-path" or "BSADF"
    endpoints: np.ndarray
    values: np.ndarray
    window_starts: np.ndarray
    min_window_obs: int
    start: Month | None = None
    n_skipped: int = 0

    def __len__(self) -> int:
        return self.endpoints.size

    @property
    def entries(self) -> list[tuple[int, float, tuple[int, int]]]:
        return [
            (int(t2), float(v), (int(t1), int(t2)))
            for t2, v, t1 in zip(self.endpoints, self.values, self.window_starts)
        ]

    def period(self, i: int) -> Month | None:
        """Calendar month of the last observation in the ``i``-th endpoint's window."""
        if self.start is None:
            return None
        return self.start + int(self.endpoints[i]) - 1


@dataclass(frozen=True)
class BubbleEpisode:
    """An exceedance run of BSADF over its critical values.

    Indices are observation indices (the last observation of the endpoint's
    window). ``end_obs`` is the first observation at which the statistic fell
    back below the critical value, or ``None`` if the run is still open at the
    end of the sample; ``last_obs`` is the final observation above it.
    """

    start_obs: int
    end_obs: int | None
    last_obs: int
    peak_obs: int
    peak_stat: float
    origination: Month | None = None
    termination: Month | None = None
    peak_month: Month | None = None
    last_month: Month | None = None

    @property
    def is_open(self) -> bool:
        return self.end_obs is None

    @property
    def duration(self) -> int:
        return self.last_obs - self.start_obs + 1


def _prepare(series, spec: AdfSpec, min_window_obs: int):
    if isinstance(series, Series):
        p, start = series.values, series.start
    else:
        p, start = np.asarray(series, dtype=np.float64).reshape(-1), None
    if min_window_obs < spec.min_window:
        raise InfeasibleError(
            f"min_window_obs={min_window_obs} is below the {spec.min_window} observations {spec} needs"
        )
    if p.size < min_window_obs:
        raise InsufficientObservationsError(
            f"series has {p.size} observations, fewer than min_window_obs={min_window_obs}"
        )
    return p, start


def _note_skipped(n_bad: int, what: str) -> None:
    if n_bad:
        log.warning("%s: skipped %d degenerate windows", what, n_bad)


def sadf_path(series, spec: AdfSpec = AdfSpec(), min_window_obs: int = DEFAULT_MIN_WINDOW) -> StatSequence:
    p, start = _prepare(series, spec, min_window_obs)
    stats, n_bad = kernels.prefix_scan(p, min_window_obs, spec.lags, spec.constant, spec.trend)
    _note_skipped(n_bad, "sadf")
    if np.all(np.isnan(stats)):
        raise NoValidWindowError("every prefix window is degenerate")
    return StatSequence(
        kind="SADF-path",
        endpoints=np.arange(min_window_obs, p.size + 1),
        values=stats,
        window_starts=np.zeros(stats.size, dtype=np.int64),
        min_window_obs=min_window_obs,
        start=start,
        n_skipped=n_bad,
    )


def sadf(series, spec: AdfSpec = AdfSpec(), min_window_obs: int = DEFAULT_MIN_WINDOW):
    """Sup of ADF statistics over forward-expanding windows anchored at the first observation.

    Returns ``(sup_stat, path)``.
    """
    path = sadf_path(series, spec, min_window_obs)
    return float(np.nanmax(path.values)), path


def bsadf_sequence(series, spec: AdfSpec = AdfSpec(), min_window_obs: int = DEFAULT_MIN_WINDOW) -> StatSequence:
    """For each endpoint, the sup of ADF statistics over all admissible start points."""
    p, start = _prepare(series, spec, min_window_obs)
    _, best, arg, n_bad = kernels.recursive_scan(p, min_window_obs, spec.lags, spec.constant, spec.trend)
    _note_skipped(n_bad, "bsadf")
    if np.all(np.isnan(best)):
        raise NoValidWindowError("every window is degenerate")
    return StatSequence(
        kind="BSADF",
        endpoints=np.arange(min_window_obs, p.size + 1),
        values=best,
        window_starts=arg,
        min_window_obs=min_window_obs,
        start=start,
        n_skipped=n_bad,
    )


def gsadf_from_bsadf(seq: StatSequence, T: int | None = None):
    """Reduce a BSADF sequence to ``(sup_stat, FractionalWindow)``.

    Ties go to the smallest start index, then the smallest endpoint.
    """
    vals = seq.values
    top = np.nanmax(vals)
    hits = np.flatnonzero(vals == top)
    i = min(hits, key=lambda j: (seq.window_starts[j], seq.endpoints[j]))
    T = int(seq.endpoints[-1]) if T is None else T
    window = FractionalWindow(int(seq.window_starts[i]), int(seq.endpoints[i]), T, seq.min_window_obs)
    return float(top), window


def gsadf(series, spec: AdfSpec = AdfSpec(), min_window_obs: int = DEFAULT_MIN_WINDOW):
    """Sup of ADF statistics over every window at least ``min_window_obs`` long.

    Returns ``(sup_stat, argmax_window)``.
    """
    return gsadf_from_bsadf(bsadf_sequence(series, spec, min_window_obs))


def full_sample_adf(series, spec: AdfSpec = AdfSpec()) -> float:
    """ADF t-ratio on the whole sample, computed by the same kernel as the scans.

    Using the scan kernel keeps ``sadf >= full_sample_adf`` exact; the reference
    :func:`adf_t_stat` agrees to rounding. NaN if the full-sample fit is degenerate.
    """
    p, _ = _prepare(series, spec, spec.min_window)
    return float(kernels.window_tstat(p, 0, p.size, spec.lags, spec.constant, spec.trend))


def brute_force(series, spec: AdfSpec = AdfSpec(), min_window_obs: int = DEFAULT_MIN_WINDOW) -> dict:
    """Enumerate every window with the reference regression. Slow; for checking the scans."""
    p, _ = _prepare(series, spec, min_window_obs)
    table = {}
    for t2 in range(min_window_obs, p.size + 1):
        for t1 in range(t2 - min_window_obs + 1):
            try:
                table[t1, t2] = adf_t_stat(p[t1:t2], spec).t_stat
            except ArithmeticError:
                table[t1, t2] = np.nan
    return table


def date_stamp(bsadf: StatSequence, cv_seq, min_duration_obs: int = 1) -> list[BubbleEpisode]:
    """Episodes where BSADF runs strictly above its critical-value sequence.

    An episode opens at the first endpoint with ``bsadf > cv`` and closes at the
    first later endpoint with ``bsadf < cv``; equality neither opens nor closes.
    Runs with fewer than ``min_duration_obs`` exceeding endpoints are dropped.
    """
    cv = np.asarray(getattr(cv_seq, "values", cv_seq), dtype=np.float64).reshape(-1)
    cv_ends = getattr(cv_seq, "endpoints", None)
    if cv.size != len(bsadf) or (cv_ends is not None and not np.array_equal(cv_ends, bsadf.endpoints)):
        raise AlignmentError(f"critical values ({cv.size}) do not line up with {len(bsadf)} BSADF endpoints")
    if min_duration_obs < 1:
        raise InputError("min_duration_obs must be at least 1")

    obs = bsadf.endpoints - 1
    vals = bsadf.values
    runs = []
    open_at = None
    for i in range(vals.size):
        if open_at is None:
            if vals[i] > cv[i]:
                open_at = i
        elif vals[i] < cv[i]:
            runs.append((open_at, i))
            open_at = None
    if open_at is not None:
        runs.append((open_at, None))

    episodes = []
    for a, b in runs:
        stop = vals.size if b is None else b
        if stop - a < min_duration_obs:
            continue
        seg = vals[a:stop]
        k = a + int(np.nanargmax(seg))
        episodes.append(
            BubbleEpisode(
                start_obs=int(obs[a]),
                end_obs=None if b is None else int(obs[b]),
                last_obs=int(obs[stop - 1]),
                peak_obs=int(obs[k]),
                peak_stat=float(vals[k]),
                origination=bsadf.period(a),
                termination=None if b is None else bsadf.period(b),
                peak_month=bsadf.period(k),
                last_month=bsadf.period(stop - 1),
            )
        )
    return episodes
