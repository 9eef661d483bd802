"""Synthetic series for validating the tests.

All generators draw their Gaussian innovations up front from one stream, so
a spliced series shares its random-walk stretch bit-for-bit with the plain
random walk of the same seed. Setting ``noise=False`` zeroes every shock.
Random walks start at 100 by default so an explosive stretch grows from a
level well above the noise scale.

The collapsing-bubble generator is a simplified two-regime process in the
spirit of Evans (1991): the bubble grows multiplicatively and, with a fixed
per-period probability, bursts back to a small re-seed level. It sits on top
of a positive geometric random-walk fundamental.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DgpSpecError
from .series import Month, Series

KINDS = ("random-walk", "explosive-ar", "collapsing-bubble", "spliced")

_DEFAULTS = {
    "random-walk": {"p0": 100.0, "sigma": 1.0},
    "explosive-ar": {"beta": 1.05, "p0": 1.0, "sigma": 1.0},
    "collapsing-bubble": {
        "fundamental_level": 100.0,
        "fundamental_floor": 1.0,
        "fundamental_sigma": 0.01,
        "growth": 1.05,
        "collapse_prob": 0.05,
        "reseed": 1.0,
        "bubble_sigma": 0.05,
    },
    "spliced": {"p0": 100.0, "sigma": 1.0, "segments": [{"start": 60, "end": 80, "beta": 1.05}]},
}


@dataclass(frozen=True)
class DgpSpec:
    kind: str
    T: int
    seed: int = 0
    params: dict = field(default_factory=dict)
    noise: bool = True
    start: Month = Month(2000, 1)
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DgpSpecError(f"unknown DGP kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        unknown = set(self.params) - set(_DEFAULTS[self.kind])
        if unknown:
            raise DgpSpecError(f"unknown parameters for {self.kind}: {sorted(unknown)}")
        if int(self.T) != self.T or self.T < 2:
            raise DgpSpecError(f"T must be an integer >= 2, got {self.T}")
        merged = {**_DEFAULTS[self.kind], **self.params}
        object.__setattr__(self, "params", merged)
        _validate(self.kind, self.T, merged)

    @classmethod
    def from_dict(cls, d: dict) -> "DgpSpec":
        d = dict(d)
        try:
            kind = d.pop("kind")
            T = d.pop("T")
        except KeyError as exc:
            raise DgpSpecError(f"DGP spec is missing {exc.args[0]!r}") from None
        start = d.pop("start", None)
        kwargs = {
            "seed": int(d.pop("seed", 0)),
            "noise": bool(d.pop("noise", True)),
            "label": str(d.pop("label", "")),
            "params": d.pop("params", {}),
        }
        if start is not None:
            kwargs["start"] = Month.parse(start)
        if d:
            raise DgpSpecError(f"unexpected keys in DGP spec: {sorted(d)}")
        return cls(kind, T, **kwargs)

    @classmethod
    def from_file(cls, path) -> "DgpSpec":
        try:
            return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
        except json.JSONDecodeError as exc:
            raise DgpSpecError(f"{path}: invalid JSON ({exc})") from None


def _validate(kind: str, T: int, p: dict) -> None:
    if p.get("sigma", 1.0) < 0:
        raise DgpSpecError("sigma must be non-negative")
    if kind == "explosive-ar" and not p["beta"] > 1:
        raise DgpSpecError(f"explosive-ar needs beta > 1, got {p['beta']}")
    if kind == "collapsing-bubble":
        if not 0 < p["collapse_prob"] < 1:
            raise DgpSpecError(f"collapse_prob must lie in (0, 1), got {p['collapse_prob']}")
        if not p["growth"] > 1:
            raise DgpSpecError(f"bubble growth must exceed 1, got {p['growth']}")
        if not p["reseed"] > 0:
            raise DgpSpecError("reseed must be positive")
        if p["fundamental_level"] < 0:
            raise DgpSpecError("fundamental_level must be non-negative")
    if kind == "spliced":
        prev = 0
        for seg in sorted(p["segments"], key=lambda s: s["start"]):
            a, b = seg["start"], seg["end"]
            if not (prev <= a < b <= T):
                raise DgpSpecError(f"segment [{a}, {b}) overlaps another or falls outside [0, {T})")
            if not seg.get("beta", 1.05) > 1:
                raise DgpSpecError(f"explosive segment needs beta > 1, got {seg.get('beta')}")
            prev = b


def _ar_path(coef: np.ndarray, eps: np.ndarray, p0: float) -> np.ndarray:
    p = np.empty(eps.size + 1)
    p[0] = p0
    for t in range(1, p.size):
        p[t] = coef[t] * p[t - 1] + eps[t - 1]
    return p


@dataclass(frozen=True, eq=False)
class DgpDraw:
    series: Series
    bubble: np.ndarray | None = None
    collapses: np.ndarray | None = None

    @property
    def n_collapses(self) -> int:
        return 0 if self.collapses is None else int(self.collapses.sum())


def generate_draw(spec: DgpSpec) -> DgpDraw:
    rng = np.random.default_rng(spec.seed)
    T, par = spec.T, spec.params
    label = spec.label or spec.kind

    if spec.kind == "collapsing-bubble":
        z_f = rng.standard_normal(T - 1)
        z_b = rng.standard_normal(T)
        u = rng.random(T)
        if not spec.noise:
            z_f[:] = 0.0
            z_b[:] = 0.0
        log_f = np.concatenate(([0.0], np.cumsum(par["fundamental_sigma"] * z_f)))
        fundamental = par["fundamental_floor"] + par["fundamental_level"] * np.exp(log_f)
        s = par["bubble_sigma"]
        shock = np.exp(s * z_b - 0.5 * s * s)
        bubble = np.empty(T)
        collapses = np.zeros(T, dtype=bool)
        bubble[0] = par["reseed"]
        for t in range(1, T):
            if u[t] < par["collapse_prob"]:
                bubble[t] = par["reseed"]
                collapses[t] = True
            else:
                bubble[t] = par["growth"] * bubble[t - 1] * shock[t]
        return DgpDraw(Series(spec.start, fundamental + bubble, label), bubble, collapses)

    eps = rng.standard_normal(T - 1) * par["sigma"]
    if not spec.noise:
        eps[:] = 0.0
    coef = np.ones(T)
    if spec.kind == "explosive-ar":
        coef[:] = par["beta"]
    elif spec.kind == "spliced":
        for seg in par["segments"]:
            coef[seg["start"] : seg["end"]] = seg.get("beta", 1.05)
    return DgpDraw(Series(spec.start, _ar_path(coef, eps, par["p0"]), label))


def generate(spec: DgpSpec) -> Series:
    return generate_draw(spec).series


def random_walk(T: int, seed: int = 0, **params) -> Series:
    return generate(DgpSpec("random-walk", T, seed, params))


def explosive_ar(T: int, beta: float, seed: int = 0, **params) -> Series:
    return generate(DgpSpec("explosive-ar", T, seed, {"beta": beta, **params}))


def spliced(T: int, start: int, end: int, beta: float = 1.05, seed: int = 0, **params) -> Series:
    """Random walk with one explosive stretch on observations ``[start, end)``."""
    segments = [{"start": start, "end": end, "beta": beta}]
    return generate(DgpSpec("spliced", T, seed, {"segments": segments, **params}))
