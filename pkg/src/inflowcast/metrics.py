"""Descriptive statistics and forecast scores."""

from dataclasses import asdict, dataclass

import numpy as np

from .ingest import DailySeries


@dataclass(frozen=True)
class SeriesStats:
    min: float
    max: float
    mean: float
    std_dev: float
    kurtosis: float
    skewness: float
    r1: float | None
    r2: float | None
    r3: float | None

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class EvalReport:
    rmse: float
    r_squared: float | None
    n: int

    def to_dict(self):
        return {"rmse": self.rmse, "r2": self.r_squared, "n": self.n}

    @classmethod
    def from_dict(cls, d):
        return cls(d["rmse"], d["r2"], d["n"])


def _pair(predicted, observed):
    p = np.asarray(predicted, dtype=np.float64).ravel()
    o = np.asarray(observed, dtype=np.float64).ravel()
    if p.size != o.size:
        raise ValueError(f"length mismatch: {p.size} predicted vs {o.size} observed")
    if p.size == 0:
        raise ValueError("empty input")
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(o))):
        raise ValueError("non-finite values")
    return p, o


def rmse(predicted, observed):
    p, o = _pair(predicted, observed)
    return float(np.sqrt(np.mean((p - o) ** 2)))


def r_squared(predicted, observed):
    """Coefficient of determination ``1 - SS_res / SS_tot``."""
    p, o = _pair(predicted, observed)
    if p.size < 2:
        raise ValueError("need at least two points")
    ss_tot = np.sum((o - o.mean()) ** 2)
    if ss_tot == 0:
        raise ValueError("observed series is constant")
    return float(1.0 - np.sum((o - p) ** 2) / ss_tot)


def evaluate(predicted, observed):
    try:
        r2 = r_squared(predicted, observed)
    except ValueError:
        r2 = None
    return EvalReport(rmse(predicted, observed), r2, int(np.size(observed)))


def autocorrelation(series, lag):
    x = np.asarray(series.values if isinstance(series, DailySeries) else series, dtype=np.float64)
    if lag < 0 or lag >= x.size:
        raise ValueError(f"lag {lag} outside [0, {x.size})")
    d = x - x.mean()
    denom = np.dot(d, d)
    if denom == 0:
        raise ValueError("constant series")
    return float(np.dot(d[: x.size - lag], d[lag:]) / denom)


def descriptive_stats(series):
    """Population moments; kurtosis is excess kurtosis."""
    x = np.asarray(series.values if isinstance(series, DailySeries) else series, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least two values")
    mean = x.mean()
    d = x - mean
    m2 = np.mean(d**2)
    if m2 == 0:
        raise ValueError("constant series")
    m3 = np.mean(d**3)
    m4 = np.mean(d**4)
    lags = [autocorrelation(x, k) if k < x.size else None for k in (1, 2, 3)]
    return SeriesStats(
        min=float(x.min()),
        max=float(x.max()),
        mean=float(mean),
        std_dev=float(np.sqrt(m2)),
        kurtosis=float(m4 / m2**2 - 3.0),
        skewness=float(m3 / m2**1.5),
        r1=lags[0],
        r2=lags[1],
        r3=lags[2],
    )
