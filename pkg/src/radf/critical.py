"""Finite-sample critical values by Monte Carlo under the unit-root null.

Replication ``i`` draws its path from ``PCG64(SeedSequence(seed, spawn_key=(i,)))``,
so a table depends only on ``(seed, replications)`` and not on how the work
is split. Quantiles are order statistics: the ``ceil(level * R)``-th smallest
of the ``R`` simulated statistics, without interpolation.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import tempfile
from dataclasses import dataclass, field
from decimal import Decimal
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import kernels
from .adf import AdfSpec
from .errors import CacheChecksumError, InfeasibleError, InsufficientObservationsError
from .recursive import DEFAULT_MIN_WINDOW
from .series import Month, Series

log = logging.getLogger(__name__)

KINDS = ("SADF", "GSADF", "BSADF")
DEFAULT_LEVELS = (0.90, 0.95, 0.99)
DEFAULT_REPLICATIONS = 10_000
DEFAULT_SEED = 20071201
MIN_REPLICATIONS = 1_000
CACHE_ENV = "RADF_CACHE_DIR"
FORMAT_VERSION = 1


def replication_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _null_row(T: int, seed: int, index: int) -> np.ndarray:
    p = np.empty(T)
    p[0] = 0.0
    np.cumsum(replication_rng(seed, index).standard_normal(T - 1), out=p[1:])
    return p


def simulate_null(T: int, seed: int = DEFAULT_SEED, index: int = 0) -> Series:
    """Driftless Gaussian random walk ``p_t = p_{t-1} + e_t`` with ``p_0 = 0``.

    ``index`` selects the replication stream; the Monte Carlo uses indices
    ``0 .. R-1`` of the same seed.
    """
    if T < 2:
        raise InsufficientObservationsError(f"T must be at least 2, got {T}")
    return Series(Month(2000, 1), _null_row(T, seed, index), f"null[{seed}:{index}]")


def null_paths(T: int, replications: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    out = np.empty((replications, T))
    for i in range(replications):
        out[i] = _null_row(T, seed, i)
    return out


def order_quantile(sorted_values: np.ndarray, level: float) -> float:
    """The ``ceil(level * R)``-th order statistic (1-based) of already sorted values."""
    R = sorted_values.size
    k = math.ceil(Decimal(repr(level)) * R)
    return float(sorted_values[min(max(k, 1), R) - 1])


@dataclass(frozen=True)
class NullDraws:
    sadf: np.ndarray
    gsadf: np.ndarray | None = None
    bsadf: np.ndarray | None = None


@lru_cache(maxsize=8)
def _draws(T: int, min_window_obs: int, replications: int, seed: int, spec: AdfSpec, full: bool) -> NullDraws:
    paths = null_paths(T, replications, seed)
    args = (min_window_obs, spec.lags, spec.constant, spec.trend)
    if not full:
        return NullDraws(kernels.prefix_sweep(paths, *args))
    sadf, gsadf, bsadf, nbad = kernels.null_sweep(paths, *args)
    if nbad.any():
        log.warning("null simulation: %d degenerate windows skipped", int(nbad.sum()))
    return NullDraws(sadf, gsadf, bsadf)


def null_draws(T, min_window_obs=DEFAULT_MIN_WINDOW, replications=DEFAULT_REPLICATIONS,
               seed=DEFAULT_SEED, spec=AdfSpec(), full=True) -> NullDraws:
    """Simulated null statistics; ``full=False`` computes only SADF (much cheaper).

    Results are memoised in-process, and a SADF-only request reuses a full
    sweep already in memory.
    """
    _check_feasible(T, min_window_obs, replications, spec)
    key = (T, min_window_obs, replications, seed, spec)
    if not full and key in _full_keys:
        full = True
    draws = _draws(*key, full)
    if full:
        _full_keys.add(key)
    return draws


_full_keys: set = set()


def _check_feasible(T, min_window_obs, replications, spec):
    if replications < MIN_REPLICATIONS:
        raise InfeasibleError(f"need at least {MIN_REPLICATIONS} replications, got {replications}")
    if min_window_obs < spec.min_window:
        raise InfeasibleError(f"min_window_obs={min_window_obs} is below the {spec.min_window} that {spec} needs")
    if T < min_window_obs:
        raise InsufficientObservationsError(f"T={T} is shorter than min_window_obs={min_window_obs}")


@dataclass(frozen=True)
class CriticalValueTable:
    """Null quantiles of one statistic.

    For ``BSADF`` the scalar ``quantiles`` refer to the final endpoint
    (sample size ``T``) and ``sequence`` holds one value per endpoint
    ``min_window_obs .. T``.
    """

    kind: str
    sample_size: int
    min_window_obs: int
    quantiles: dict
    replications: int
    seed: int
    spec: AdfSpec = AdfSpec()
    sequence: dict = field(default_factory=dict)

    @property
    def levels(self) -> tuple:
        return tuple(sorted(self.quantiles))

    @property
    def endpoints(self) -> np.ndarray:
        return np.arange(self.min_window_obs, self.sample_size + 1)

    def subset(self, levels) -> "CriticalValueTable":
        levels = sorted(levels)
        return CriticalValueTable(
            self.kind, self.sample_size, self.min_window_obs,
            {lv: self.quantiles[lv] for lv in levels}, self.replications, self.seed, self.spec,
            {lv: self.sequence[lv] for lv in levels if lv in self.sequence},
        )

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "sample_size": self.sample_size,
            "min_window_obs": self.min_window_obs,
            "replications": self.replications,
            "seed": self.seed,
            "spec": {"lags": self.spec.lags, "constant": self.spec.constant, "trend": self.spec.trend},
            "quantiles": {repr(lv): q for lv, q in sorted(self.quantiles.items())},
        }
        if self.sequence:
            d["sequence"] = {repr(lv): list(map(float, s)) for lv, s in sorted(self.sequence.items())}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CriticalValueTable":
        return cls(
            kind=d["kind"],
            sample_size=int(d["sample_size"]),
            min_window_obs=int(d["min_window_obs"]),
            quantiles={float(k): float(v) for k, v in d["quantiles"].items()},
            replications=int(d["replications"]),
            seed=int(d["seed"]),
            spec=AdfSpec(**d["spec"]),
            sequence={float(k): tuple(map(float, v)) for k, v in d.get("sequence", {}).items()},
        )


def _tables_from_draws(draws: NullDraws, T, min_window_obs, replications, seed, spec, levels):
    def quantiles(x):
        x = np.sort(x[np.isfinite(x)])
        return {lv: order_quantile(x, lv) for lv in levels}

    tables = {"SADF": CriticalValueTable("SADF", T, min_window_obs, quantiles(draws.sadf), replications, seed, spec)}
    if draws.gsadf is not None:
        tables["GSADF"] = CriticalValueTable(
            "GSADF", T, min_window_obs, quantiles(draws.gsadf), replications, seed, spec
        )
        cols = np.sort(draws.bsadf, axis=0)
        seq = {lv: tuple(order_quantile(cols[:, e], lv) for e in range(cols.shape[1])) for lv in levels}
        tables["BSADF"] = CriticalValueTable(
            "BSADF", T, min_window_obs, {lv: s[-1] for lv, s in seq.items()}, replications, seed, spec, seq
        )
    return tables


class CriticalValueCache:
    """One JSON file per table under ``root``, guarded by a SHA-256 checksum.

    Default root is ``$RADF_CACHE_DIR`` or ``~/.cache/radf``.
    """

    def __init__(self, root=None):
        if root is None:
            root = os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "radf"
        self.root = Path(root)

    def path_for(self, kind, T, min_window_obs, replications, seed, spec=AdfSpec()) -> Path:
        tag = kind if spec == AdfSpec() else f"{kind}-{spec.tag}"
        return self.root / f"{tag}_T{T}_w{min_window_obs}_r{replications}_s{seed}.cvt"

    def get(self, kind, T, min_window_obs, replications, seed, spec=AdfSpec()):
        """Return the stored table, or ``None`` on a miss or a corrupt entry."""
        path = self.path_for(kind, T, min_window_obs, replications, seed, spec)
        if not path.exists():
            return None
        try:
            return read_table(path)
        except CacheChecksumError as exc:
            log.warning("ignoring corrupt cache entry %s: %s", path, exc)
            return None

    def put(self, table: CriticalValueTable) -> Path:
        if table.replications < MIN_REPLICATIONS:
            raise ValueError(f"tables with fewer than {MIN_REPLICATIONS} replications are not cached")
        path = self.path_for(table.kind, table.sample_size, table.min_window_obs, table.replications, table.seed, table.spec)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(dump_table(table))
        os.replace(tmp, path)
        return path


def _digest(body: dict) -> str:
    canon = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def dump_table(table: CriticalValueTable) -> str:
    body = table.to_dict()
    doc = {"format": FORMAT_VERSION, "generator": "radf", "sha256": _digest(body), "table": body}
    return json.dumps(doc, indent=1) + "\n"


def read_table(path) -> CriticalValueTable:
    raw = Path(path).read_bytes()
    try:
        doc = json.loads(raw.decode("utf-8"))
        body = doc["table"]
        stored = doc["sha256"]
    except (UnicodeDecodeError, ValueError, KeyError, TypeError) as exc:
        raise CacheChecksumError(f"{path}: unreadable ({exc})") from None
    if _digest(body) != stored:
        raise CacheChecksumError(f"{path}: checksum mismatch")
    return CriticalValueTable.from_dict(body)


def _resolve_cache(cache):
    if cache is False or cache is None:
        return None
    if cache is True:
        return CriticalValueCache()
    if isinstance(cache, CriticalValueCache):
        return cache
    return CriticalValueCache(cache)


def critical_values(kind: str, T: int, min_window_obs: int = DEFAULT_MIN_WINDOW, levels=DEFAULT_LEVELS,
                    replications: int = DEFAULT_REPLICATIONS, seed: int = DEFAULT_SEED,
                    spec: AdfSpec = AdfSpec(), cache=None) -> CriticalValueTable:
    """Monte Carlo quantiles of ``kind`` (SADF, GSADF or BSADF) at sample size ``T``.

    ``cache`` may be a :class:`CriticalValueCache`, a directory, ``True`` for
    the default location, or ``None``/``False`` to skip the disk cache.
    """
    kind = kind.upper()
    if kind not in KINDS:
        raise ValueError(f"unknown statistic {kind!r}; expected one of {KINDS}")
    levels = tuple(sorted({float(lv) for lv in levels}))
    if not levels or not all(0 < lv < 1 for lv in levels):
        raise ValueError(f"levels must lie in (0, 1), got {levels}")
    _check_feasible(T, min_window_obs, replications, spec)

    store = _resolve_cache(cache)
    if store is not None:
        hit = store.get(kind, T, min_window_obs, replications, seed, spec)
        if hit is not None and set(levels) <= set(hit.quantiles):
            log.info("%s critical values T=%d w=%d R=%d seed=%d: served from cache %s",
                     kind, T, min_window_obs, replications, seed, store.root)
            return hit.subset(levels)

    all_levels = tuple(sorted(set(levels) | set(DEFAULT_LEVELS)))
    draws = null_draws(T, min_window_obs, replications, seed, spec, full=kind != "SADF")
    tables = _tables_from_draws(draws, T, min_window_obs, replications, seed, spec, all_levels)
    log.info("%s critical values T=%d w=%d R=%d seed=%d: computed", kind, T, min_window_obs, replications, seed)
    if store is not None:
        for table in tables.values():
            store.put(table)
    return tables[kind].subset(levels)


def bsadf_cv_sequence(T: int, min_window_obs: int = DEFAULT_MIN_WINDOW, level: float = 0.95,
                      replications: int = DEFAULT_REPLICATIONS, seed: int = DEFAULT_SEED,
                      spec: AdfSpec = AdfSpec(), cache=None) -> np.ndarray:
    """Per-endpoint null quantiles of BSADF for endpoints ``min_window_obs .. T``.

    The entry for endpoint ``t2`` depends only on the first ``t2`` observations of
    each null path, so it is the BSADF critical value for sample size ``t2``.
    """
    table = critical_values("BSADF", T, min_window_obs, (level,), replications, seed, spec, cache)
    return np.array(table.sequence[float(level)])
