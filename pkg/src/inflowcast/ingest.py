"""Daily inflow series: CSV loading, calendar splits, min-max scaling, windows."""

import csv
import datetime as dt
import io
import math
from dataclasses import dataclass

import numpy as np


class DataError(ValueError):
    """Input data violates the series contract."""


def _frozen(values):
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DailySeries:
    """Inflow (cusecs) for consecutive calendar days beginning at ``start_date``."""

    start_date: dt.date
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 1 or values.size == 0:
            raise DataError("series must hold at least one value")
        if not np.all(np.isfinite(values)):
            raise DataError("non-finite inflow")
        if np.any(values < 0):
            raise DataError("negative inflow")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    @property
    def end_date(self):
        return self.start_date + dt.timedelta(days=len(self) - 1)

    def dates(self):
        return [self.start_date + dt.timedelta(days=i) for i in range(len(self))]

    def index_of(self, day):
        return (day - self.start_date).days

    def slice(self, idx):
        """Sub-series for a contiguous index range."""
        return DailySeries(self.start_date + dt.timedelta(days=idx.start), self.values[idx.start:idx.stop])


@dataclass(frozen=True)
class ScalerParams:
    min_value: float
    max_value: float

    def __post_init__(self):
        if not (math.isfinite(self.min_value) and math.isfinite(self.max_value)):
            raise ValueError("scaler bounds must be finite")
        if not self.max_value > self.min_value:
            raise ValueError(
                f"degenerate scaler: max {self.max_value} must exceed min {self.min_value}"
            )

    def to_dict(self):
        return {"min_value": self.min_value, "max_value": self.max_value}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["min_value"]), float(d["max_value"]))


@dataclass(frozen=True)
class NormalizedSeries:
    values: np.ndarray
    scaler: ScalerParams


@dataclass(frozen=True)
class SplitSpec:
    train: range
    validation: range
    test: range

    def to_dict(self):
        return {k: [r.start, r.stop] for k, r in
                (("train", self.train), ("validation", self.validation), ("test", self.test))}


@dataclass(frozen=True)
class WindowSet:
    lookback: int
    inputs: np.ndarray  # (n, lookback)
    targets: np.ndarray  # (n,)

    def __len__(self):
        return self.targets.size

    def subset(self, idx):
        return WindowSet(self.lookback, self.inputs[idx], self.targets[idx])


def load_daily_series(source):
    """Parse a ``date,inflow`` CSV from a text or binary stream (or str/bytes).

    Lines starting with ``#`` before the header are skipped.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    if text.startswith("\ufeff"):
        text = text[1:]
    lines = text.splitlines()
    while lines and lines[0].startswith("#"):
        lines.pop(0)
    if not lines:
        raise DataError("empty file")
    reader = csv.reader(io.StringIO("\n".join(lines)))
    header = next(reader)
    if [h.strip() for h in header] != ["date", "inflow"]:
        raise DataError(f"expected header 'date,inflow', got {','.join(header)!r}")

    start = prev = None
    values = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2:
            raise DataError(f"line {lineno}: malformed row {row!r}")
        try:
            day = dt.date.fromisoformat(row[0].strip())
            value = float(row[1])
        except ValueError as exc:
            raise DataError(f"line {lineno}: malformed row {row!r}") from exc
        if not math.isfinite(value):
            raise DataError(f"line {lineno}: non-finite inflow")
        if value < 0:
            raise DataError(f"line {lineno}: negative inflow {value}")
        if prev is None:
            start = day
        else:
            expected = prev + dt.timedelta(days=1)
            if day == prev or day < prev:
                raise DataError(f"line {lineno}: duplicate or out-of-order date {day}")
            if day != expected:
                raise DataError(f"gap at {expected.isoformat()}")
        prev = day
        values.append(value)
    if not values:
        raise DataError("empty file")
    return DailySeries(start, values)


def dump_daily_series(series, header_comment=None):
    out = io.StringIO()
    if header_comment:
        for line in header_comment.splitlines():
            out.write(f"# {line}\n")
    out.write("date,inflow\n")
    for day, v in zip(series.dates(), series.values):
        out.write(f"{day.isoformat()},{float(v)!r}\n")
    return out.getvalue()


def add_years(day, years):
    try:
        return day.replace(year=day.year + years)
    except ValueError:  # Feb 29 -> Mar 1
        return day.replace(year=day.year + years, month=3, day=1)


def split_series(series, train_years=12, validation_years=1):
    """Calendar split: first 12 years train, 13th year validation, rest test."""
    start = series.start_date
    min_years = train_years + validation_years + 1
    if series.end_date + dt.timedelta(days=1) < add_years(start, min_years):
        raise DataError(f"series spans less than {min_years} years")
    t_end = series.index_of(add_years(start, train_years))
    v_end = series.index_of(add_years(start, train_years + validation_years))
    return SplitSpec(range(0, t_end), range(t_end, v_end), range(v_end, len(series)))


def _as_array(values):
    if isinstance(values, DailySeries):
        return values.values
    return np.asarray(values, dtype=np.float64)


def fit_scaler(series, idx=None):
    """Min/max over ``idx`` only (the whole series when omitted)."""
    x = _as_array(series)
    if idx is not None:
        x = x[idx.start:idx.stop]
    if x.size == 0:
        raise ValueError("empty fitting range")
    lo, hi = float(x.min()), float(x.max())
    if hi == lo:
        raise ValueError("constant values in fitting range")
    return ScalerParams(lo, hi)


def normalize(series, scaler):
    """Min-max transform; values outside the fitted range are not clamped."""
    x = _as_array(series)
    return NormalizedSeries(_frozen((x - scaler.min_value) / (scaler.max_value - scaler.min_value)), scaler)


def denormalize(values, scaler):
    v = np.asarray(values, dtype=np.float64)
    return v * (scaler.max_value - scaler.min_value) + scaler.min_value


def make_windows(values, lookback):
    """Sliding windows: ``inputs[i] = values[i:i+lookback]``, ``targets[i] = values[i+lookback]``."""
    if isinstance(values, NormalizedSeries):
        values = values.values
    x = np.asarray(values, dtype=np.float64)
    if lookback < 1:
        raise ValueError("lookback must be >= 1")
    if x.size <= lookback:
        raise ValueError(f"lookback {lookback} needs a series longer than {x.size}")
    inputs = np.lib.stride_tricks.sliding_window_view(x, lookback)[:-1].copy()
    return WindowSet(lookback, inputs, x[lookback:].copy())
