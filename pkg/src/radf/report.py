"""Command implementations behind the CLI and their report formats.

Each ``cmd_*`` function returns a plain dict (JSON-ready, no tuples) so the
report can be emitted as JSON, rendered for humans or flattened to CSV.
Reports carry ``schema_version``; bump it whenever a field changes meaning.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .adf import AdfSpec
from .critical import DEFAULT_LEVELS, DEFAULT_REPLICATIONS, DEFAULT_SEED, CriticalValueCache, critical_values
from .dgp import DgpSpec, generate
from .errors import InputError
from .recursive import DEFAULT_MIN_WINDOW, bsadf_sequence, date_stamp, full_sample_adf, gsadf_from_bsadf, sadf
from .series import Series, load_csv_columns, write_csv

SCHEMA_VERSION = 1
TEST_KINDS = ("SADF", "GSADF")
DATESTAMP_LEVELS = (0.90, 0.95)


@dataclass
class RunConfig:
    input: Path | None = None
    columns: list = field(default_factory=list)
    kinds: tuple = TEST_KINDS
    min_window_obs: int = DEFAULT_MIN_WINDOW
    lags: int = 0
    constant: bool = True
    trend: bool = False
    levels: tuple = DEFAULT_LEVELS
    replications: int = DEFAULT_REPLICATIONS
    seed: int = DEFAULT_SEED
    cache_root: Path | None = None
    use_cache: bool = True
    output_format: str = "human"
    min_duration_obs: int = 1
    sample_size: int | None = None

    @property
    def spec(self) -> AdfSpec:
        return AdfSpec(self.lags, self.constant, self.trend)

    @property
    def cache(self):
        return CriticalValueCache(self.cache_root) if self.use_cache else None

    def settings(self) -> dict:
        return {
            "min_window_obs": self.min_window_obs,
            "lags": self.lags,
            "constant": self.constant,
            "trend": self.trend,
            "levels": [float(lv) for lv in self.levels],
            "replications": self.replications,
            "seed": self.seed,
        }


def level_key(level: float) -> str:
    return f"{level:.2f}" if round(level, 2) == level else repr(level)


def level_column(level: float) -> str:
    return f"cv{level * 100:g}"


def _load(config: RunConfig) -> list[Series]:
    if config.input is None:
        raise InputError("an input CSV is required")
    return load_csv_columns(config.input, config.columns or None)


def _cv_table(kind, T, config: RunConfig, levels=None):
    return critical_values(
        kind, T, config.min_window_obs, levels or config.levels, config.replications,
        config.seed, config.spec, config.cache,
    )


def _window_info(series: Series, t1: int, t2: int) -> dict:
    return {"t1": t1, "t2": t2, "first": str(series.period(t1)), "last": str(series.period(t2 - 1))}


def _sample_info(series: Series) -> dict:
    return {"start": str(series.start), "end": str(series.end), "T": len(series)}


def cmd_test(config: RunConfig) -> dict:
    """SADF/GSADF statistics with their critical values and per-level verdicts."""
    all_series = _load(config)
    T = len(all_series[0])
    spec = config.spec
    kinds = [k.upper() for k in config.kinds]
    tables = {kind: _cv_table(kind, T, config) for kind in kinds}

    results = []
    for s in all_series:
        full = _finite_or_none(full_sample_adf(s, spec))
        for kind in kinds:
            if kind == "SADF":
                stat, path = sadf(s, spec, config.min_window_obs)
                i = int(np.nanargmax(path.values))
                window = _window_info(s, 0, int(path.endpoints[i]))
            else:
                stat, win = gsadf_from_bsadf(bsadf_sequence(s, spec, config.min_window_obs), T)
                window = _window_info(s, win.t1, win.t2)
            cvs = tables[kind].quantiles
            results.append({
                "series": s.label,
                "test": kind,
                "statistic": stat,
                "window": window,
                "full_sample_adf": full,
                "reject": {level_key(lv): bool(stat > cvs[lv]) for lv in sorted(cvs)},
            })
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "test",
        "sample": _sample_info(all_series[0]),
        "settings": config.settings(),
        "critical_values": {
            kind: {level_key(lv): q for lv, q in sorted(t.quantiles.items())} for kind, t in tables.items()
        },
        "results": results,
    }


def _finite_or_none(x):
    x = float(x)
    return x if np.isfinite(x) else None


def _episode_dict(ep) -> dict:
    return {
        "origination": str(ep.origination),
        "termination": None if ep.termination is None else str(ep.termination),
        "last_above": str(ep.last_month),
        "peak_month": str(ep.peak_month),
        "peak_stat": ep.peak_stat,
        "start_obs": ep.start_obs,
        "end_obs": ep.end_obs,
        "duration_obs": ep.duration,
    }


def cmd_datestamp(config: RunConfig) -> dict:
    """BSADF sequence, its critical-value sequences and the dated episodes per level."""
    series = _load(config)[0]
    T = len(series)
    levels = tuple(sorted(set(config.levels)))
    seq = bsadf_sequence(series, config.spec, config.min_window_obs)
    table = _cv_table("BSADF", T, config, levels)
    stat, win = gsadf_from_bsadf(seq, T)

    episodes = {}
    for lv in levels:
        eps = date_stamp(seq, table.sequence[lv], config.min_duration_obs)
        episodes[level_key(lv)] = [_episode_dict(e) for e in eps]

    plot = [
        {"period": str(seq.period(i)), "bsadf": _finite_or_none(seq.values[i]),
         **{level_column(lv): float(table.sequence[lv][i]) for lv in levels}}
        for i in range(len(seq))
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "datestamp",
        "series": series.label,
        "sample": _sample_info(series),
        "settings": {**config.settings(), "levels": list(levels), "min_duration_obs": config.min_duration_obs},
        "gsadf": {"statistic": stat, "window": _window_info(series, win.t1, win.t2)},
        "skipped_windows": seq.n_skipped,
        "episodes": episodes,
        "plot": plot,
    }


def cmd_critvals(config: RunConfig) -> dict:
    if config.sample_size is None:
        if config.input is None:
            raise InputError("give a sample size or an input CSV to take it from")
        T = len(_load(config)[0])
    else:
        T = config.sample_size
    tables = [_cv_table(kind.upper(), T, config) for kind in config.kinds]
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "critvals",
        "sample_size": T,
        "settings": config.settings(),
        "tables": [
            {"kind": t.kind, "quantiles": {level_key(lv): q for lv, q in sorted(t.quantiles.items())}}
            for t in tables
        ],
    }


def cmd_simulate(spec_path, output=None) -> Series:
    spec = DgpSpec.from_file(spec_path)
    series = generate(spec)
    if output is not None:
        write_csv(output, [series])
    return series


# -- rendering ---------------------------------------------------------------


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def render_test(report: dict) -> str:
    s = report["sample"]
    cfg = report["settings"]
    lines = [
        f"Sample {s['start']}..{s['end']} (T={s['T']}), minimum window {cfg['min_window_obs']}, "
        f"lags {cfg['lags']}, {cfg['replications']} replications, seed {cfg['seed']}",
    ]
    width = max([len(r["series"]) for r in report["results"]] + [10])
    for kind, cvs in report["critical_values"].items():
        heads = [f"{float(k) * 100:g} c.v." for k in cvs]
        lines.append("")
        lines.append(f"{'Series':<{width}}  {kind + ' stat':>10}" + "".join(f"{h:>10}" for h in heads) + "  verdict")
        for r in report["results"]:
            if r["test"] != kind:
                continue
            passed = [k for k, v in r["reject"].items() if v]
            verdict = f"reject at {float(passed[-1]) * 100:g}%" if passed else "fail to reject"
            lines.append(
                f"{r['series']:<{width}}  {r['statistic']:10.4f}" + "".join(f"{v:10.4f}" for v in cvs.values())
                + f"  {verdict}"
            )
    return "\n".join(lines) + "\n"


def render_test_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    levels = list(next(iter(report["critical_values"].values())))
    w.writerow(["series", "test", "statistic"] + [f"cv{float(k) * 100:g}" for k in levels]
               + [f"reject{float(k) * 100:g}" for k in levels])
    for r in report["results"]:
        cvs = report["critical_values"][r["test"]]
        w.writerow([r["series"], r["test"], repr(r["statistic"])] + [repr(cvs[k]) for k in levels]
                   + [int(r["reject"][k]) for k in levels])
    return buf.getvalue()


def render_datestamp(report: dict) -> str:
    s = report["sample"]
    g = report["gsadf"]
    lines = [
        f"{report['series']}: {s['start']}..{s['end']} (T={s['T']})",
        f"GSADF {g['statistic']:.4f} attained on {g['window']['first']}..{g['window']['last']}",
    ]
    for key, eps in report["episodes"].items():
        lines.append("")
        lines.append(f"Episodes at the {float(key) * 100:g}% critical-value sequence: {len(eps) or 'none'}")
        for e in eps:
            end = e["termination"] or "ongoing"
            lines.append(
                f"  {e['origination']} -> {end}  ({e['duration_obs']} months above, "
                f"peak {e['peak_stat']:.4f} in {e['peak_month']})"
            )
    return "\n".join(lines) + "\n"


def plot_csv(report: dict) -> str:
    buf = io.StringIO()
    rows = report["plot"]
    cols = list(rows[0]) if rows else ["period", "bsadf"]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([row["period"]] + ["" if row[c] is None else repr(row[c]) for c in cols[1:]])
    return buf.getvalue()


def render_critvals(report: dict) -> str:
    cfg = report["settings"]
    lines = [
        f"Critical values for T={report['sample_size']}, minimum window {cfg['min_window_obs']}, lags {cfg['lags']}"
        f" ({cfg['replications']} replications, seed {cfg['seed']})",
    ]
    keys = list(report["tables"][0]["quantiles"])
    lines.append(f"{'kind':<8}" + "".join(f"{float(k) * 100:>9g}%" for k in keys))
    for t in report["tables"]:
        lines.append(f"{t['kind']:<8}" + "".join(f"{v:10.4f}" for v in t["quantiles"].values()))
    return "\n".join(lines) + "\n"


def render_critvals_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "level", "value", "sample_size", "replications", "seed"])
    cfg = report["settings"]
    for t in report["tables"]:
        for k, v in t["quantiles"].items():
            w.writerow([t["kind"], k, repr(v), report["sample_size"], cfg["replications"], cfg["seed"]])
    return buf.getvalue()
