"""Seasonal toy inflow records for demos and tests."""

import datetime as dt

import numpy as np

from .ingest import DailySeries
from .rng import Rng


def seasonal_inflow(start=dt.date(1999, 1, 1), years=20, base=20000.0, amplitude=15000.0,
                    period=365.0, noise=0.0, phi=0.9, seed=7):
    """``base + amplitude * sin(2 pi t / period)`` times optional AR(1) log-noise.

    ``noise`` is the stationary standard deviation of the log multiplier.
    """
    n = (dt.date(start.year + years, start.month, start.day) - start).days
    t = np.arange(n, dtype=np.float64)
    values = base + amplitude * np.sin(2.0 * np.pi * t / period)
    if noise > 0:
        z = Rng(seed).normals(n)
        e = np.empty(n)
        prev = 0.0
        scale = noise * np.sqrt(1.0 - phi * phi)
        for i in range(n):
            prev = phi * prev + scale * z[i]
            e[i] = prev
        values = values * np.exp(e)
    return DailySeries(start, np.maximum(values, 0.0))
