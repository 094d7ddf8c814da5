"""Comparison forecasts for an evaluation window: 10-daily averages and Thomas-Fiering."""

import datetime as dt

import numpy as np

from . import thomas_fiering as tf
from .rng import DEFAULT_SEED, Rng


def ten_day_bin(day):
    """36 bins per year: days 1-10, 11-20 and 21-end of each month."""
    return (day.month - 1) * 3 + min((day.day - 1) // 10, 2)


def ten_daily_forecast(history, dates):
    """Historical mean of each 10-day bin, used as the forecast for ``dates``."""
    bins = np.array([ten_day_bin(d) for d in history.dates()])
    means = np.full(36, np.nan)
    for b in range(36):
        sel = history.values[bins == b]
        if sel.size:
            means[b] = sel.mean()
    out = np.array([means[ten_day_bin(d)] for d in dates])
    if np.any(np.isnan(out)):
        raise ValueError("history does not cover every 10-day bin")
    return out


def _tf_path(params, slots, y_prev, observed_std, mode, seed):
    """Standardized forecast along a sequence of period slots.

    ``synthetic`` runs the stochastic recursion from the last observed value;
    ``conditional`` uses the one-step conditional mean from each previous
    observed value.
    """
    betas = params.betas[slots]
    if mode == "conditional":
        prev = np.concatenate([[y_prev], observed_std[:-1]])
        return betas * prev
    if mode != "synthetic":
        raise ValueError(f"unknown Thomas-Fiering mode {mode!r}")
    z = Rng(seed).normals(len(slots))
    return tf._recurse(betas, z, y_prev)


def tf_daily_forecast(series, eval_start, n_days, mode="synthetic", seed=DEFAULT_SEED):
    """Daily TF forecast; parameters from complete years before ``eval_start``.

    Returns (predicted, observed) raw flows.
    """
    i0 = series.index_of(eval_start)
    if i0 < 1:
        raise ValueError("no history before evaluation window")
    history = series.slice(range(0, i0))
    params = tf.fit_daily_params(history)
    dates = [eval_start + dt.timedelta(days=i) for i in range(n_days)]
    slots = np.array([tf.day_slot(d) for d in dates])
    observed = series.values[i0:i0 + n_days]
    obs_std = (observed - params.means[slots]) / params.std_devs[slots]
    prev_slot = tf.day_slot(eval_start - dt.timedelta(days=1))
    y_prev = (series.values[i0 - 1] - params.means[prev_slot]) / params.std_devs[prev_slot]
    y = _tf_path(params, slots, y_prev, obs_std, mode, seed)
    return params.means[slots] + params.std_devs[slots] * y, observed


def month_keys(dates):
    keys = []
    for d in dates:
        if not keys or keys[-1] != (d.year, d.month):
            keys.append((d.year, d.month))
    return keys


def monthly_means(series, start, n_days):
    i0 = series.index_of(start)
    dates = [start + dt.timedelta(days=i) for i in range(n_days)]
    vals = series.values[i0:i0 + n_days]
    keys = month_keys(dates)
    tags = [(d.year, d.month) for d in dates]
    return keys, np.array([vals[[t == k for t in tags]].mean() for k in keys])


def tf_monthly_forecast(series, eval_start, n_days, mode="synthetic", seed=DEFAULT_SEED):
    """Monthly-mean TF forecast vs observed monthly means over the window."""
    i0 = series.index_of(eval_start)
    history = series.slice(range(0, i0))
    _, matrix = tf.yearly_matrix(history, monthly=True)
    params = tf.fit_period_params(matrix)
    keys, observed = monthly_means(series, eval_start, n_days)
    slots = np.array([m - 1 for _, m in keys])
    obs_std = (observed - params.means[slots]) / params.std_devs[slots]
    prev_month_end = eval_start.replace(day=1) - dt.timedelta(days=1)
    prev_start = prev_month_end.replace(day=1)
    if series.index_of(prev_start) < 0:
        raise ValueError("need one full month of history before the evaluation window")
    _, prev_mean = monthly_means(series, prev_start, prev_month_end.day)
    ps = prev_month_end.month - 1
    y_prev = (prev_mean[0] - params.means[ps]) / params.std_devs[ps]
    y = _tf_path(params, slots, y_prev, obs_std, mode, seed)
    return params.means[slots] + params.std_devs[slots] * y, observed
