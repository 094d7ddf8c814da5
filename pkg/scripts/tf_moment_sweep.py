"""How closely Thomas-Fiering output reproduces fitted monthly moments as the run length grows."""

import numpy as np

from inflowcast import thomas_fiering as tf


def fitted_params(years=30, seed=1):
    rng = np.random.default_rng(seed)
    base = 4000 + 2500 * np.sin(2 * np.pi * np.arange(12) / 12)
    ar = np.zeros(years * 12)
    for t in range(1, ar.size):
        ar[t] = 0.6 * ar[t - 1] + rng.normal()
    return tf.fit_period_params(base * (1 + 0.12 * ar.reshape(years, 12)))


def main():
    params = fitted_params()
    print(f"{'years':>6s} {'max mean dev':>13s} {'max std dev':>12s} {'max beta dev':>13s}")
    for n in (50, 200, 1000, 2000, 10000):
        s = tf.generate_monthly(params, n, seed=9001)
        m = np.max(np.abs(s.flows.mean(0) / params.means - 1))
        sd = np.max(np.abs(s.flows.std(0, ddof=1) / params.std_devs - 1))
        y = s.standardized
        r = [np.corrcoef(y[1:, 0], y[:-1, 11])[0, 1]] + [np.corrcoef(y[:, j], y[:, j - 1])[0, 1] for j in range(1, 12)]
        b = np.max(np.abs(np.array(r) - params.betas))
        print(f"{n:6d} {m:13.2%} {sd:12.2%} {b:13.3f}")


if __name__ == "__main__":
    main()
