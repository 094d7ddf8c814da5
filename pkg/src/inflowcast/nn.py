"""Stacked LSTM regressor written directly in numpy.

Each layer holds four gate matrices of shape (h, h + d) applied to the
concatenation ``[h_prev, x_t]``, in gate order forget, input, candidate,
output. The top layer's final hidden vector feeds a scalar dense head.
Gradients are derived by hand for this topology (backpropagation through
time over the lookback window, zero initial state for every window).
"""

import copy
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .ingest import ScalerParams
from .metrics import evaluate
from .rng import Rng

GATES = ("f", "i", "c", "o")
FORMAT_VERSION = 1


class CheckpointError(ValueError):
    pass


@dataclass(frozen=True)
class NetworkConfig:
    lookback: int = 3
    hidden_sizes: tuple = (4, 4)
    batch_size: int = 15
    # "tanh" is standard; "sigmoid" reproduces the candidate gate exactly as printed
    candidate_activation: str = "tanh"

    def __post_init__(self):
        object.__setattr__(self, "hidden_sizes", tuple(int(h) for h in self.hidden_sizes))
        if self.lookback < 1:
            raise ValueError("lookback must be >= 1")
        if not self.hidden_sizes or min(self.hidden_sizes) < 1:
            raise ValueError("hidden sizes must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.candidate_activation not in ("tanh", "sigmoid"):
            raise ValueError("candidate_activation must be 'tanh' or 'sigmoid'")

    def to_dict(self):
        d = asdict(self)
        d["hidden_sizes"] = list(self.hidden_sizes)
        return d


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    learning_rate: float = 1e-3
    optimizer: str = "adam"
    validation_every: int = 5
    test_every: int = 10
    seed: int = 42

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning rate must be > 0")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")


@dataclass
class LstmLayerParams:
    weights: np.ndarray  # (4, h, h + d), gates f, i, c, o
    biases: np.ndarray  # (4, h)

    @property
    def hidden_size(self):
        return self.weights.shape[1]

    @property
    def input_size(self):
        return self.weights.shape[2] - self.weights.shape[1]


@dataclass
class CellState:
    h: np.ndarray
    c: np.ndarray

    @classmethod
    def zeros(cls, hidden_size, batch=None):
        shape = (hidden_size,) if batch is None else (batch, hidden_size)
        return cls(np.zeros(shape), np.zeros(shape))


@dataclass
class LstmNetwork:
    config: NetworkConfig
    layers: list
    dense_weights: np.ndarray  # (h_last,)
    dense_bias: np.ndarray  # (1,)

    def parameters(self):
        """Parameter arrays in a fixed order; gradients use the same order."""
        out = []
        for layer in self.layers:
            out += [layer.weights, layer.biases]
        return out + [self.dense_weights, self.dense_bias]

    def copy(self):
        return copy.deepcopy(self)


@dataclass
class TrainReport:
    train_loss: list = field(default_factory=list)
    validation: list = field(default_factory=list)  # {"epoch", "loss", "rmse"}
    test: list = field(default_factory=list)  # {"epoch", "rmse", "r2", "n"}

    def to_dict(self):
        return {"train_loss": self.train_loss, "validation": self.validation, "test": self.test}


def sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def param_count(config):
    total, d = 0, 1
    for h in config.hidden_sizes:
        total += 4 * (h * (h + d) + h)
        d = h
    return total + d + 1


def layer_param_counts(config):
    counts, d = [], 1
    for h in config.hidden_sizes:
        counts.append(4 * (h * (h + d) + h))
        d = h
    return counts + [d + 1]


def lstm_cell_forward(params, x_t, state, candidate="tanh"):
    """One LSTM step for a single vector (d,) or a batch (B, d).

    Returns the new CellState and a cache of everything backprop needs.
    """
    x_t = np.asarray(x_t, dtype=np.float64)
    h, d = params.hidden_size, params.input_size
    if x_t.shape[-1] != d or state.h.shape[-1] != h or state.c.shape != state.h.shape:
        raise ValueError(f"dimension mismatch: expected input {d}, hidden {h}")
    if not np.all(np.isfinite(x_t)):
        raise ValueError("non-finite input")
    z = np.concatenate([state.h, x_t], axis=-1)
    a = z @ params.weights.reshape(4 * h, h + d).T + params.biases.reshape(4 * h)
    a_f, a_i, a_c, a_o = np.split(a, 4, axis=-1)
    f, i, o = sigmoid(a_f), sigmoid(a_i), sigmoid(a_o)
    g = np.tanh(a_c) if candidate == "tanh" else sigmoid(a_c)
    c = f * state.c + i * g
    tc = np.tanh(c)
    h_new = o * tc
    cache = {"z": z, "c_prev": state.c, "f": f, "i": i, "g": g, "o": o, "tc": tc}
    return CellState(h_new, c), cache


def _layer_backward(params, caches, dh_seq, candidate):
    """BPTT through one layer.

    ``dh_seq`` is (T, B, h): loss gradient w.r.t. each step's hidden output
    coming from above. Returns (dW, db, dx_seq) with dx_seq (T, B, d).
    """
    h, d = params.hidden_size, params.input_size
    W = params.weights.reshape(4 * h, h + d)
    dW = np.zeros_like(W)
    db = np.zeros(4 * h)
    T, B = dh_seq.shape[:2]
    dx_seq = np.empty((T, B, d))
    dh_next = np.zeros((B, h))
    dc_next = np.zeros((B, h))
    for t in range(T - 1, -1, -1):
        k = caches[t]
        f, i, g, o, tc = k["f"], k["i"], k["g"], k["o"], k["tc"]
        dh = dh_seq[t] + dh_next
        dc = dh * o * (1.0 - tc * tc) + dc_next
        da_f = dc * k["c_prev"] * f * (1.0 - f)
        da_i = dc * g * i * (1.0 - i)
        if candidate == "tanh":
            da_c = dc * i * (1.0 - g * g)
        else:
            da_c = dc * i * g * (1.0 - g)
        da_o = dh * tc * o * (1.0 - o)
        da = np.concatenate([da_f, da_i, da_c, da_o], axis=1)
        dW += da.T @ k["z"]
        db += da.sum(axis=0)
        dz = da @ W
        dh_next = dz[:, :h]
        dx_seq[t] = dz[:, h:]
        dc_next = dc * f
    return dW.reshape(4, h, h + d), db.reshape(4, h), dx_seq


def _as_batch(net, windows):
    x = np.asarray(windows, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != net.config.lookback:
        raise ValueError(f"windows must have length {net.config.lookback}, got shape {np.shape(windows)}")
    return x, single


def _forward(net, x):
    """Forward over (B, T) windows; returns predictions (B,) and per-layer caches."""
    cand = net.config.candidate_activation
    B, T = x.shape
    seq = x.T[:, :, None]  # (T, B, 1)
    all_caches = []
    for layer in net.layers:
        state = CellState.zeros(layer.hidden_size, B)
        caches, outs = [], []
        for t in range(T):
            state, cache = lstm_cell_forward(layer, seq[t], state, cand)
            caches.append(cache)
            outs.append(state.h)
        all_caches.append(caches)
        seq = np.stack(outs)
    h_top = seq[-1]
    return h_top @ net.dense_weights + net.dense_bias[0], all_caches, h_top


def network_forward(net, windows):
    """Prediction for one window (returns float) or a (B, lookback) batch (returns (B,))."""
    x, single = _as_batch(net, windows)
    y = _forward(net, x)[0]
    return float(y[0]) if single else y


def mse_loss(predicted, target):
    p = np.asarray(predicted, dtype=np.float64)
    t = np.asarray(target, dtype=np.float64)
    if p.shape != t.shape:
        raise ValueError("shape mismatch")
    if p.size == 0:
        raise ValueError("empty batch")
    return float(np.mean((p - t) ** 2))


def bptt_gradients(net, inputs, targets):
    """Batch-mean MSE and its exact gradient, congruent with ``net.parameters()``."""
    x, _ = _as_batch(net, inputs)
    y_true = np.asarray(targets, dtype=np.float64).reshape(-1)
    if x.shape[0] == 0 or y_true.size != x.shape[0]:
        raise ValueError("batch must be non-empty with one target per window")
    y, caches, h_top = _forward(net, x)
    err = y - y_true
    loss = float(np.mean(err**2))
    dy = 2.0 * err / err.size
    d_dense_w = h_top.T @ dy
    d_dense_b = np.array([dy.sum()])
    T, B = x.shape[1], x.shape[0]
    dh_seq = np.zeros((T, B, net.layers[-1].hidden_size))
    dh_seq[-1] = np.outer(dy, net.dense_weights)
    grads = []
    for layer, layer_caches in zip(reversed(net.layers), reversed(caches)):
        dW, db, dh_seq = _layer_backward(layer, layer_caches, dh_seq, net.config.candidate_activation)
        grads = [dW, db] + grads
    grads += [d_dense_w, d_dense_b]
    if not all(np.all(np.isfinite(g)) for g in grads):
        raise FloatingPointError("non-finite gradient")
    return loss, grads


class Adam:
    def __init__(self, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.t = 0
        self.m = None
        self.v = None

    def step(self, params, grads):
        """In-place bias-corrected Adam update."""
        _check_grads(params, grads)
        if self.m is None:
            self.m = [np.zeros_like(p) for p in params]
            self.v = [np.zeros_like(p) for p in params]
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


class SGD:
    def __init__(self, lr=1e-2):
        self.lr = lr

    def step(self, params, grads):
        _check_grads(params, grads)
        for p, g in zip(params, grads):
            p -= self.lr * g


def _check_grads(params, grads):
    if len(params) != len(grads) or any(p.shape != g.shape for p, g in zip(params, grads)):
        raise ValueError("gradients are not congruent with parameters")
    if not all(np.all(np.isfinite(g)) for g in grads):
        raise FloatingPointError("non-finite gradient")


def make_optimizer(name, lr):
    return Adam(lr) if name == "adam" else SGD(lr)


def init_params(config, seed=42):
    """Glorot-uniform weights per gate matrix; zero biases except forget gate = 1."""
    rng = Rng(seed)
    layers, d = [], 1
    for h in config.hidden_sizes:
        limit = np.sqrt(6.0 / ((h + d) + h))
        W = rng.uniform(-limit, limit, (4, h, h + d))
        b = np.zeros((4, h))
        b[0] = 1.0
        layers.append(LstmLayerParams(W, b))
        d = h
    limit = np.sqrt(6.0 / (d + 1))
    return LstmNetwork(config, layers, rng.uniform(-limit, limit, d), np.zeros(1))


def predict(net, windows):
    inputs = windows.inputs if hasattr(windows, "inputs") else windows
    x, _ = _as_batch(net, inputs)
    return _forward(net, x)[0]


def rollout(net, seed_window, k):
    """k-step recursive forecast: each prediction becomes the newest input."""
    window = [float(v) for v in np.asarray(seed_window, dtype=np.float64).ravel()]
    if len(window) != net.config.lookback:
        raise ValueError(f"seed window must have length {net.config.lookback}")
    if k < 0:
        raise ValueError("k must be >= 0")
    out = []
    for _ in range(k):
        p = network_forward(net, window)
        out.append(p)
        window = window[1:] + [p]
    return np.array(out)


def fit(net, train, val=None, cfg=TrainConfig(), test=None, log=None):
    """Train a copy of ``net`` on ``train`` windows in fixed order.

    Validation loss is recorded every ``cfg.validation_every`` epochs and test
    RMSE/R^2 every ``cfg.test_every`` epochs; neither set is ever trained on.
    """
    if train is None or len(train) == 0:
        raise ValueError("empty training set")
    net = net.copy()
    params = net.parameters()
    opt = make_optimizer(cfg.optimizer, cfg.learning_rate)
    report = TrainReport()
    bs = net.config.batch_size
    n = len(train)
    for epoch in range(1, cfg.epochs + 1):
        total = 0.0
        for s in range(0, n, bs):
            loss, grads = bptt_gradients(net, train.inputs[s:s + bs], train.targets[s:s + bs])
            opt.step(params, grads)
            total += loss * min(bs, n - s)
        report.train_loss.append(total / n)
        if val is not None and len(val) and epoch % cfg.validation_every == 0:
            pred = predict(net, val)
            loss = mse_loss(pred, val.targets)
            report.validation.append({"epoch": epoch, "loss": loss, "rmse": float(np.sqrt(loss))})
        if test is not None and len(test) and epoch % cfg.test_every == 0:
            ev = evaluate(predict(net, test), test.targets)
            report.test.append({"epoch": epoch, **ev.to_dict()})
        if log is not None:
            log(epoch, report)
    return net, report


def save_checkpoint(net, scaler):
    doc = {
        "format_version": FORMAT_VERSION,
        "config": net.config.to_dict(),
        "scaler": scaler.to_dict() if scaler is not None else None,
        "gate_order": list(GATES),
        "layers": [
            {
                "input_size": layer.input_size,
                "hidden_size": layer.hidden_size,
                "weights": [layer.weights[g].tolist() for g in range(4)],
                "biases": [layer.biases[g].tolist() for g in range(4)],
            }
            for layer in net.layers
        ],
        "dense": {"weights": net.dense_weights.tolist(), "bias": float(net.dense_bias[0])},
    }
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


def load_checkpoint(data):
    try:
        doc = json.loads(data.decode("utf-8") if isinstance(data, bytes) else data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"corrupt checkpoint: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(
            f"unsupported checkpoint version {doc.get('format_version') if isinstance(doc, dict) else None!r}"
        )
    try:
        config = NetworkConfig(**doc["config"])
        layers = []
        d = 1
        for spec, h in zip(doc["layers"], config.hidden_sizes):
            W = np.array(spec["weights"], dtype=np.float64)
            b = np.array(spec["biases"], dtype=np.float64)
            if W.shape != (4, h, h + d) or b.shape != (4, h):
                raise CheckpointError("layer shape disagrees with config")
            layers.append(LstmLayerParams(W, b))
            d = h
        if len(layers) != len(config.hidden_sizes):
            raise CheckpointError("layer count disagrees with config")
        dw = np.array(doc["dense"]["weights"], dtype=np.float64)
        if dw.shape != (d,):
            raise CheckpointError("dense shape disagrees with config")
        net = LstmNetwork(config, layers, dw, np.array([float(doc["dense"]["bias"])]))
        scaler = ScalerParams.from_dict(doc["scaler"]) if doc.get("scaler") else None
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CheckpointError):
            raise
        raise CheckpointError(f"corrupt checkpoint: {exc}") from exc
    if not all(np.all(np.isfinite(p)) for p in net.parameters()):
        raise CheckpointError("non-finite parameters")
    return net, scaler
