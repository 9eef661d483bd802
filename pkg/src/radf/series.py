"""Monthly series container, CSV ingestion and price/rent transformations."""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import AlignmentError, DomainError, FrequencyError, GapError, ParseError

MAX_ABS_VALUE = 1e12

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


@dataclass(frozen=True, order=True)
class Month:
    """A calendar month. Supports ``month + n`` and ``month - other``."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")

    @classmethod
    def parse(cls, text: str) -> "Month":
        m = _MONTH_RE.match(text.strip())
        if m is None:
            raise FrequencyError(f"expected a YYYY-MM period, got {text!r}")
        month = int(m.group(2))
        if not 1 <= month <= 12:
            raise ParseError(f"invalid month in period {text!r}")
        return cls(int(m.group(1)), month)

    @property
    def ordinal(self) -> int:
        return self.year * 12 + (self.month - 1)

    @classmethod
    def from_ordinal(cls, n: int) -> "Month":
        return cls(n // 12, n % 12 + 1)

    def __add__(self, n: int) -> "Month":
        return Month.from_ordinal(self.ordinal + int(n))

    def __sub__(self, other):
        if isinstance(other, Month):
            return self.ordinal - other.ordinal
        return Month.from_ordinal(self.ordinal - int(other))

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


def _frozen_values(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Series:
    """Uniformly spaced monthly series; observation ``t`` falls in ``start + t``."""

    start: Month
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        values = _frozen_values(self.values)
        if values.size == 0:
            raise DomainError("series must contain at least one observation")
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise DomainError(f"non-finite value at index {int(bad[0])}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.start == other.start
            and self.label == other.label
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    @property
    def end(self) -> Month:
        return self.start + (len(self) - 1)

    def period(self, t: int) -> Month:
        if not 0 <= t < len(self):
            raise IndexError(t)
        return self.start + t

    def periods(self) -> list[Month]:
        return [self.start + t for t in range(len(self))]

    def with_values(self, values, label: str | None = None) -> "Series":
        return Series(self.start, values, self.label if label is None else label)


def _check_aligned(a: Series, b: Series) -> None:
    if a.start != b.start or len(a) != len(b):
        raise AlignmentError(
            f"series not aligned: {a.label or 'a'} covers {a.start}..{a.end}, "
            f"{b.label or 'b'} covers {b.start}..{b.end}"
        )


def load_csv(path, column: str | None = None) -> Series:
    """Read one value column from a monthly CSV.

    The first column must be ``period`` formatted as ``YYYY-MM``. If
    ``column`` is omitted the first value column is used.
    """
    return load_csv_columns(path, None if column is None else [column])[0]


def load_csv_columns(path, columns: Sequence[str] | None = None) -> list[Series]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if len(header) < 2 or header[0].lower() != "period":
            raise ParseError(f"{path}: header must start with 'period' and name a value column")
        names = header[1:] if columns is None else list(columns)
        if columns is None:
            names = names[:1]
        idx = []
        for name in names:
            if name not in header[1:]:
                raise ParseError(f"{path}: no column named {name!r}")
            idx.append(header.index(name))

        start = None
        expected = None
        data: list[list[float]] = [[] for _ in names]
        for rowno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            month = Month.parse(row[0])
            if start is None:
                start = month
            elif month != expected:
                raise GapError(
                    f"{path}: row {rowno}: expected period {expected}, found {month}",
                    expected,
                )
            expected = month + 1
            for slot, j in enumerate(idx):
                cell = row[j].strip() if j < len(row) else ""
                try:
                    value = float(cell)
                except ValueError:
                    raise ParseError(
                        f"{path}: row {rowno}: non-numeric value {cell!r} in column {names[slot]!r}",
                        rowno,
                    ) from None
                if not math.isfinite(value):
                    raise ParseError(f"{path}: row {rowno}: non-finite value {cell!r}", rowno)
                if abs(value) > MAX_ABS_VALUE:
                    raise DomainError(
                        f"{path}: row {rowno}: |{cell}| exceeds {MAX_ABS_VALUE:g}; check units"
                    )
                data[slot].append(value)
    if start is None:
        raise ParseError(f"{path}: no data rows")
    return [Series(start, vals, name) for name, vals in zip(names, data)]


def write_csv(path_or_file, series: Iterable[Series]) -> None:
    """Write aligned series as a monthly CSV. Floats use ``repr`` so reloads are bit-exact."""
    series = list(series)
    if not series:
        raise ValueError("nothing to write")
    for other in series[1:]:
        _check_aligned(series[0], other)
    if hasattr(path_or_file, "write"):
        _write_rows(path_or_file, series)
    else:
        with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
            _write_rows(fh, series)


def _write_rows(fh, series: list[Series]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["period"] + [s.label or f"value{i}" for i, s in enumerate(series)])
    for t, month in enumerate(series[0].periods()):
        writer.writerow([str(month)] + [repr(float(s.values[t])) for s in series])


def price_rent_ratio(price: Series, annual_rent: Series) -> Series:
    _check_aligned(price, annual_rent)
    bad = np.flatnonzero(annual_rent.values <= 0)
    if bad.size:
        raise DomainError(f"rent must be positive; index {int(bad[0])} is {annual_rent.values[bad[0]]}")
    label = f"{price.label}/{annual_rent.label}" if price.label or annual_rent.label else "pr_ratio"
    return price.with_values(price.values / annual_rent.values, label)


def ratio_from_rental_yield(monthly_yield: Series) -> Series:
    """Price-to-rent ratio as the reciprocal of the annualised monthly yield."""
    bad = np.flatnonzero(monthly_yield.values <= 0)
    if bad.size:
        raise DomainError(f"yield must be positive; index {int(bad[0])} is {monthly_yield.values[bad[0]]}")
    return monthly_yield.with_values(1.0 / (12.0 * monthly_yield.values), f"pr_ratio({monthly_yield.label})")


def spread(price: Series, rent: Series, r: float) -> Series:
    """Price minus rent capitalised at discount rate ``r``."""
    if not r > 0:
        raise DomainError(f"discount rate must be positive, got {r}")
    _check_aligned(price, rent)
    return price.with_values(price.values - rent.values / r, f"spread({price.label})")


@dataclass(frozen=True)
class FractionalWindow:
    """Window ``[t1, t2)`` of a length-``T`` sample, also expressed as fractions of ``T``."""

    t1: int
    t2: int
    T: int
    min_window_obs: int

    def __post_init__(self):
        if not (0 <= self.t1 <= self.t2 - self.min_window_obs and self.t2 <= self.T and self.min_window_obs > 0):
            raise ValueError(f"infeasible window {self}")

    @property
    def r1(self) -> float:
        return self.t1 / self.T

    @property
    def r2(self) -> float:
        return self.t2 / self.T

    @property
    def r0(self) -> float:
        return self.min_window_obs / self.T

    @property
    def rw(self) -> float:
        return (self.t2 - self.t1) / self.T
