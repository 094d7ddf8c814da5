"""Lag-one Markov (Thomas-Fiering) synthetic streamflow.

Monthly parameters use 12 periods. The daily variant uses 366 day-of-year
periods in which Feb 29 (index 59) copies Feb 28's parameters.
"""

import calendar
import datetime as dt
import json
import math
from dataclasses import dataclass

import numpy as np

from .ingest import DailySeries
from .rng import DEFAULT_SEED, Rng

FEB29 = 59  # zero-based day-of-year slot in the 366-period layout


@dataclass(frozen=True)
class PeriodParams:
    means: np.ndarray
    std_devs: np.ndarray
    betas: np.ndarray

    def __post_init__(self):
        for name in ("means", "std_devs", "betas"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        n = self.means.size
        if self.std_devs.size != n or self.betas.size != n or n == 0:
            raise ValueError("means, std_devs and betas must have equal non-zero length")
        if np.any(self.std_devs <= 0):
            raise ValueError("standard deviations must be positive")
        if np.any(np.abs(self.betas) > 1):
            raise ValueError("|beta| must not exceed 1")

    @property
    def period_count(self):
        return self.means.size

    def to_dict(self):
        return {
            "period_count": self.period_count,
            "means": self.means.tolist(),
            "std_devs": self.std_devs.tolist(),
            "betas": self.betas.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        params = cls(d["means"], d["std_devs"], d["betas"])
        if params.period_count != d.get("period_count", params.period_count):
            raise ValueError("period_count disagrees with array lengths")
        return params

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class SyntheticSeries:
    standardized: np.ndarray  # (years, periods)
    flows: np.ndarray


def fit_period_params(flows):
    """Per-period sample mean/std and lag-one correlation with the preceding period.

    ``flows`` is years x periods in chronological order; period 0 of year i is
    paired with the last period of year i-1, so it uses one pair fewer.
    """
    x = np.asarray(flows, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need a years x periods matrix with at least 2 years")
    means = x.mean(axis=0)
    stds = x.std(axis=0, ddof=1)
    if np.any(stds == 0):
        raise ValueError(f"zero-variance period(s): {np.flatnonzero(stds == 0).tolist()}")
    n_periods = x.shape[1]
    betas = np.empty(n_periods)
    for j in range(n_periods):
        if j == 0:
            cur, prev = x[1:, 0], x[:-1, -1]
        else:
            cur, prev = x[:, j], x[:, j - 1]
        dx = cur - cur.mean()
        dy = prev - prev.mean()
        denom = math.sqrt(np.dot(dx, dx) * np.dot(dy, dy))
        betas[j] = np.dot(dx, dy) / denom if denom > 0 else 0.0
    return PeriodParams(means, stds, np.clip(betas, -1.0, 1.0))


def standardize(flows, params):
    x = np.asarray(flows, dtype=np.float64)
    if x.shape[-1] != params.period_count:
        raise ValueError("shape mismatch")
    return (x - params.means) / params.std_devs


def destandardize(y, params):
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 2 or y.shape[1] != params.period_count:
        raise ValueError(f"expected (years, {params.period_count}) matrix, got {y.shape}")
    return params.means + params.std_devs * y


def _recurse(betas, z, y0):
    """y_t = beta_t * y_{t-1} + sqrt(1 - beta_t^2) * z_t over a flat sequence."""
    b = np.asarray(betas, dtype=np.float64)
    if np.any(np.abs(b) > 1):
        raise ValueError("|beta| must not exceed 1")
    scale = np.sqrt(1.0 - b * b)
    out = np.empty(b.size)
    y = y0
    for t in range(b.size):
        y = b[t] * y + scale[t] * z[t]
        out[t] = y
    return out


def generate_standardized(params, n_years, rng=None, noise_override=None, y0=0.0):
    """Standardized years x periods matrix from the lag-one recursion.

    ``noise_override`` replaces the normal variates (any array with
    n_years * period_count entries, consumed in row-major order).
    """
    if n_years < 0:
        raise ValueError("n_years must be >= 0")
    n = n_years * params.period_count
    if noise_override is not None:
        z = np.asarray(noise_override, dtype=np.float64).ravel()
        if z.size != n:
            raise ValueError(f"noise_override needs {n} values, got {z.size}")
    else:
        z = (rng if rng is not None else Rng()).normals(n)
    betas = np.tile(params.betas, n_years)
    return _recurse(betas, z, y0).reshape(n_years, params.period_count)


def generate_monthly(params, n_years, seed=DEFAULT_SEED, y0=0.0):
    y = generate_standardized(params, n_years, Rng(seed), y0=y0)
    return SyntheticSeries(y, destandardize(y, params))


def day_slot(day):
    """Zero-based slot in the 366-period day-of-year layout."""
    doy = day.timetuple().tm_yday - 1
    if not calendar.isleap(day.year) and doy >= FEB29:
        doy += 1
    return doy


def expand_to_366(params):
    """Insert a Feb 29 slot copying Feb 28 into 365-period parameters."""
    if params.period_count != 365:
        raise ValueError("expected 365 periods")
    ins = lambda a: np.insert(a, FEB29, a[FEB29 - 1])  # noqa: E731
    return PeriodParams(ins(params.means), ins(params.std_devs), ins(params.betas))


def yearly_matrix(series, monthly=False):
    """Complete calendar years of ``series`` as years x 12 (monthly means) or years x 365.

    Feb 29 is dropped from the daily layout. Returns (first_year, matrix).
    """
    dates = series.dates()
    first = series.start_date.year + (series.start_date != dt.date(series.start_date.year, 1, 1))
    last = series.end_date.year - (series.end_date != dt.date(series.end_date.year, 12, 31))
    if last < first:
        raise ValueError("series contains no complete calendar year")
    rows = []
    for year in range(first, last + 1):
        i0 = series.index_of(dt.date(year, 1, 1))
        block = series.values[i0:i0 + (366 if calendar.isleap(year) else 365)]
        if monthly:
            months = np.array([d.month for d in dates[i0:i0 + block.size]])
            rows.append([block[months == m].mean() for m in range(1, 13)])
        else:
            if calendar.isleap(year):
                block = np.delete(block, FEB29)
            rows.append(block)
    return first, np.array(rows, dtype=np.float64)


def fit_daily_params(series):
    """366-period day-of-year parameters from the complete years of a daily series."""
    _, matrix = yearly_matrix(series)
    return expand_to_366(fit_period_params(matrix))


def calendar_slots(start, n_days):
    return np.array([day_slot(start + dt.timedelta(days=i)) for i in range(n_days)])


def generate_daily(params, n_years, seed=DEFAULT_SEED, start_year=2000, y0=0.0, noise_override=None):
    """Daily synthetic flows over ``n_years`` calendar years starting Jan 1 of ``start_year``.

    Each day follows the previous calendar day; Feb 29 slots are visited only
    in leap years. ``standardized`` and ``flows`` are flat (1, n_days) rows.
    """
    if params.period_count != 366:
        raise ValueError("daily generation needs 366-period parameters")
    if n_years < 0:
        raise ValueError("n_years must be >= 0")
    start = dt.date(start_year, 1, 1)
    n_days = (dt.date(start_year + n_years, 1, 1) - start).days
    slots = calendar_slots(start, n_days)
    if noise_override is not None:
        z = np.asarray(noise_override, dtype=np.float64).ravel()
        if z.size != n_days:
            raise ValueError(f"noise_override needs {n_days} values, got {z.size}")
    else:
        z = Rng(seed).normals(n_days)
    y = _recurse(params.betas[slots], z, y0)
    flows = params.means[slots] + params.std_devs[slots] * y
    return SyntheticSeries(y.reshape(1, -1), flows.reshape(1, -1))


def synthetic_to_daily_series(synth, params, start_year, clip_negative=True):
    """Flatten generated flows into a DailySeries starting Jan 1 of ``start_year``.

    Monthly flows become piecewise-constant daily values. Negative flows,
    which the normal recursion can produce, are clipped to zero by default.
    """
    start = dt.date(start_year, 1, 1)
    if params.period_count == 12:
        vals = []
        for i, row in enumerate(synth.flows):
            for m in range(12):
                vals.extend([row[m]] * calendar.monthrange(start_year + i, m + 1)[1])
        vals = np.array(vals, dtype=np.float64)
    else:
        vals = synth.flows.ravel()
    if clip_negative:
        vals = np.maximum(vals, 0.0)
    return DailySeries(start, vals)
