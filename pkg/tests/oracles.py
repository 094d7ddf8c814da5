"""Independent reference computations in plain Python loops."""

import math


def rmse(p, o):
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(p, o)) / len(p))


def r_squared(p, o):
    mean = sum(o) / len(o)
    ss_tot = sum((b - mean) ** 2 for b in o)
    ss_res = sum((b - a) ** 2 for a, b in zip(p, o))
    return 1 - ss_res / ss_tot


def autocorrelation(x, k):
    n = len(x)
    mean = sum(x) / n
    num = 0.0
    for t in range(n - k):
        num += (x[t] - mean) * (x[t + k] - mean)
    den = sum((v - mean) ** 2 for v in x)
    return num / den


def moments(x):
    n = len(x)
    mean = sum(x) / n
    m = [sum((v - mean) ** p for v in x) / n for p in (2, 3, 4)]
    return {
        "min": min(x),
        "max": max(x),
        "mean": mean,
        "std_dev": math.sqrt(m[0]),
        "skewness": m[1] / m[0] ** 1.5,
        "kurtosis": m[2] / m[0] ** 2 - 3,
    }


def pearson(a, b):
    ma, mb = sum(a) / len(a), sum(b) / len(b)
    num = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    return num / math.sqrt(sum((x - ma) ** 2 for x in a) * sum((y - mb) ** 2 for y in b))


def adam(grad_fn, x0, lr, steps, b1=0.9, b2=0.999, eps=1e-8):
    """Scalar-per-coordinate Adam, returns the trajectory."""
    x = list(x0)
    m = [0.0] * len(x)
    v = [0.0] * len(x)
    traj = []
    for t in range(1, steps + 1):
        g = grad_fn(x)
        for j in range(len(x)):
            m[j] = b1 * m[j] + (1 - b1) * g[j]
            v[j] = b2 * v[j] + (1 - b2) * g[j] ** 2
            mhat = m[j] / (1 - b1**t)
            vhat = v[j] / (1 - b2**t)
            x[j] -= lr * mhat / (math.sqrt(vhat) + eps)
        traj.append(list(x))
    return traj


def finite_difference_grads(net, inputs, targets, step=1e-5):
    """Central differences of the batch MSE w.r.t. every parameter entry."""
    import numpy as np

    from inflowcast.nn import mse_loss, network_forward

    grads = []
    for p in net.parameters():
        g = np.zeros_like(p)
        flat, gflat = p.reshape(-1), g.reshape(-1)
        for k in range(flat.size):
            orig = flat[k]
            flat[k] = orig + step
            lp = mse_loss(network_forward(net, inputs), targets)
            flat[k] = orig - step
            lm = mse_loss(network_forward(net, inputs), targets)
            flat[k] = orig
            gflat[k] = (lp - lm) / (2 * step)
        grads.append(g)
    return grads


def max_relative_error(analytic, numeric, floor=1e-6):
    """max |a - n| / max(|a|, |n|, floor) over all entries."""
    import numpy as np

    worst = 0.0
    for a, n in zip(analytic, numeric):
        den = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
        worst = max(worst, float(np.max(np.abs(a - n) / den)))
    return worst


def single_step_grads(net, inputs, targets):
    """Backprop for lookback 1: zero initial state, no recurrence, per-sample loops."""
    import numpy as np

    sig = lambda v: 1 / (1 + np.exp(-v))  # noqa: E731
    B = len(targets)
    grads = [np.zeros_like(p) for p in net.parameters()]
    for b in range(B):
        x = np.array([inputs[b][0]])
        caches = []
        for layer in net.layers:
            h = layer.hidden_size
            z = np.concatenate([np.zeros(h), x])
            W, bias = layer.weights, layer.biases
            i = sig(W[1] @ z + bias[1])
            g = np.tanh(W[2] @ z + bias[2])
            o = sig(W[3] @ z + bias[3])
            c = i * g
            x = o * np.tanh(c)
            caches.append((z, i, g, o, c))
        y = net.dense_weights @ x + net.dense_bias[0]
        dy = 2 * (y - targets[b]) / B
        grads[-2] += dy * x
        grads[-1][0] += dy
        dh = dy * net.dense_weights
        for li in range(len(net.layers) - 1, -1, -1):
            layer = net.layers[li]
            z, i, g, o, c = caches[li]
            tc = np.tanh(c)
            dc = dh * o * (1 - tc**2)
            da = [np.zeros_like(i), dc * g * i * (1 - i), dc * i * (1 - g**2), dh * tc * o * (1 - o)]
            dz = np.zeros_like(z)
            for gate in range(4):
                grads[2 * li][gate] += np.outer(da[gate], z)
                grads[2 * li + 1][gate] += da[gate]
                dz += layer.weights[gate].T @ da[gate]
            dh = dz[layer.hidden_size:]
    return grads
