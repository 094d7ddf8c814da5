"""Flood/drought flagging from a recursive LSTM forecast of the last k days."""

from dataclasses import dataclass

import numpy as np

from .ingest import DailySeries, normalize
from .metrics import rmse
from .nn import predict, rollout

NONE, FLOOD, DROUGHT = "none", "flood", "drought"


@dataclass(frozen=True)
class AnomalyConfig:
    k: int = 7
    rho: float = 2.0
    tau: float = 0.03

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.rho > 1:
            raise ValueError("rho must be > 1")
        if not self.tau > 0:
            raise ValueError("tau must be > 0")


@dataclass(frozen=True)
class AnomalyVerdict:
    kind: str
    observed_rmse: float
    predicted_sum: float
    observed_sum: float
    k: int
    rho: float
    tau: float
    predictions: tuple = ()

    def to_dict(self):
        return {
            "kind": self.kind,
            "observed_rmse": self.observed_rmse,
            "predicted_sum": self.predicted_sum,
            "observed_sum": self.observed_sum,
            "k": self.k,
            "rho": self.rho,
            "tau": self.tau,
        }


def detect(net, ground_truth, cfg, scaler):
    """Compare a k-step rollout against the last k observed days.

    The rollout is seeded with the ``lookback`` days just before the last k.
    ``scaler`` must be the training-time scaler; refitting on the window under
    test would normalize a spike away. An anomaly is flagged only when the
    RMSE strictly exceeds tau * rho; flood if the forecast undershoots the
    observed total, drought otherwise (ties included).
    """
    lookback = net.config.lookback
    values = ground_truth.values if isinstance(ground_truth, DailySeries) else np.asarray(ground_truth, float)
    if values.size < cfg.k + lookback:
        raise ValueError(f"need at least k + lookback = {cfg.k + lookback} days, got {values.size}")
    x = normalize(values, scaler).values
    observed = x[-cfg.k:]
    seed = x[-(cfg.k + lookback):-cfg.k]
    predictions = rollout(net, seed, cfg.k)
    if not np.all(np.isfinite(predictions)):
        raise ValueError("network produced non-finite predictions")
    err = rmse(predictions, observed)
    p_sum, o_sum = float(predictions.sum()), float(observed.sum())
    if err <= cfg.tau * cfg.rho:
        kind = NONE
    elif p_sum < o_sum:
        kind = FLOOD
    else:
        kind = DROUGHT
    return AnomalyVerdict(kind, err, p_sum, o_sum, cfg.k, cfg.rho, cfg.tau, tuple(predictions.tolist()))


def calibrate_tau(net, windows):
    """Empirical tau: one-step RMSE over validation windows."""
    if windows is None or len(windows) == 0:
        raise ValueError("empty validation set")
    return rmse(predict(net, windows), windows.targets)
