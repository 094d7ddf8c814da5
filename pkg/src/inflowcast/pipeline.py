"""Split -> scale -> window plumbing shared by the CLI and the scripts."""

from dataclasses import dataclass

import numpy as np

from .ingest import NormalizedSeries, ScalerParams, SplitSpec, WindowSet, fit_scaler, make_windows, normalize, split_series
from .nn import predict


@dataclass(frozen=True)
class Prepared:
    split: SplitSpec
    scaler: ScalerParams
    normalized: NormalizedSeries
    train: WindowSet
    validation: WindowSet
    test: WindowSet


def windows_by_target(windows, idx):
    """Windows whose target day falls inside ``idx`` (inputs may reach back before it)."""
    lb = windows.lookback
    lo, hi = max(idx.start - lb, 0), max(idx.stop - lb, 0)
    return windows.subset(slice(lo, hi))


def prepare(series, lookback=3, scaler_fit="train", split=None):
    """Split the series, fit the scaler (train range or full series) and window it.

    Windows are cut from the whole normalized series and assigned to a split
    by the index of their target day.
    """
    split = split or split_series(series)
    if scaler_fit == "train":
        scaler = fit_scaler(series, split.train)
    elif scaler_fit == "full":
        scaler = fit_scaler(series)
    else:
        raise ValueError(f"scaler_fit must be 'train' or 'full', not {scaler_fit!r}")
    norm = normalize(series, scaler)
    windows = make_windows(norm, lookback)
    return Prepared(
        split,
        scaler,
        norm,
        windows_by_target(windows, split.train),
        windows_by_target(windows, split.validation),
        windows_by_target(windows, split.test),
    )


def one_step_predictions(net, normalized_values, start, stop):
    """One-step forecasts for target indices [start, stop) from observed history."""
    lb = net.config.lookback
    start = max(start, lb)
    if stop <= start:
        return start, np.empty(0)
    x = np.asarray(normalized_values, dtype=np.float64)
    inputs = np.lib.stride_tricks.sliding_window_view(x[start - lb:stop - 1], lb)
    return start, predict(net, inputs)
