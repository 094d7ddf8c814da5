"""Acceptance checks 1-10. Run with ``pytest tests/test_acceptance.py -s`` to see the verdict lines."""

import datetime as dt
import os
import time

import numpy as np
import pytest

from inflowcast import nn, reservoir
from inflowcast import thomas_fiering as tf
from inflowcast.anomaly import DROUGHT, FLOOD, NONE, AnomalyConfig, calibrate_tau, detect
from inflowcast.ingest import DailySeries, SplitSpec, denormalize, fit_scaler, load_daily_series, normalize, split_series
from inflowcast.metrics import autocorrelation, descriptive_stats, evaluate, r_squared, rmse
from inflowcast.pipeline import prepare
from inflowcast.plot import svg_line_chart
from inflowcast.synthetic import seasonal_inflow

import oracles

REAL_DATA_ENV = "INFLOWCAST_BHAKRA_CSV"


def verdict(n, name, ok, detail=""):
    print(f"\n[acceptance {n:2d}] {'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
    assert ok, f"criterion {n} ({name}) failed: {detail}"


def test_01_topology():
    cfg = nn.NetworkConfig(lookback=3, hidden_sizes=(4, 4))
    counts, total = nn.layer_param_counts(cfg), nn.param_count(cfg)
    net = nn.init_params(cfg)
    actual = sum(p.size for p in net.parameters())
    verdict(1, "topology", counts == [96, 144, 5] and total == 245 and actual == 245,
            f"layers={counts} total={total} allocated={actual}")


def test_02_gradients():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst, nets = 0.0, 0
    for h in (2, 3, 4):
        for lookback in (1, 2, 3, 4):
            for rep in range(5):
                net = nn.init_params(nn.NetworkConfig(lookback=lookback, hidden_sizes=(h, h)), seed=1000 + nets)
                for p in net.parameters():
                    p += rng.normal(0, 0.3, p.shape)
                x, y = rng.random((3, lookback)), rng.random(3)
                _, grads = nn.bptt_gradients(net, x, y)
                worst = max(worst, oracles.max_relative_error(grads, oracles.finite_difference_grads(net, x, y)))
                nets += 1
    elapsed = time.perf_counter() - t0
    verdict(2, "BPTT vs finite differences", nets >= 50 and worst < 1e-5 and elapsed < 10,
            f"nets={nets} max_rel_err={worst:.2e} time={elapsed:.1f}s")


def test_03_normalization():
    rng = np.random.default_rng(3)
    exact, worst = True, 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 200))
        x = rng.lognormal(9, 1, n)
        s = DailySeries(dt.date(2000, 1, 1), x)
        sc = fit_scaler(s)
        z = normalize(s, sc).values
        exact &= z[np.argmin(x)] == 0.0 and z[np.argmax(x)] == 1.0
        worst = max(worst, float(np.max(np.abs(denormalize(z, sc) - x) / np.maximum(np.abs(x), 1.0))))
    verdict(3, "min-max normalization", exact and worst < 1e-12, f"endpoints_exact={exact} max_roundtrip_err={worst:.1e}")


def _monthly_matrix(years=30, seed=1):
    rng = np.random.default_rng(seed)
    base = 4000 + 2500 * np.sin(2 * np.pi * np.arange(12) / 12)
    ar = np.zeros(years * 12)
    for t in range(1, ar.size):
        ar[t] = 0.6 * ar[t - 1] + rng.normal()
    return base * (1 + 0.12 * ar.reshape(years, 12))


def test_04_thomas_fiering_preservation():
    t0 = time.perf_counter()
    params = tf.fit_period_params(_monthly_matrix())
    s = tf.generate_monthly(params, 2000, seed=9001)
    elapsed = time.perf_counter() - t0
    mean_dev = np.max(np.abs(s.flows.mean(axis=0) / params.means - 1))
    std_dev = np.max(np.abs(s.flows.std(axis=0, ddof=1) / params.std_devs - 1))
    y = s.standardized
    r = [np.corrcoef(y[1:, 0], y[:-1, 11])[0, 1]] + [np.corrcoef(y[:, j], y[:, j - 1])[0, 1] for j in range(1, 12)]
    beta_dev = np.max(np.abs(np.array(r) - params.betas))
    ok = mean_dev < 0.02 and std_dev < 0.05 and beta_dev < 0.05 and elapsed < 5
    verdict(4, "Thomas-Fiering moments", ok,
            f"mean={mean_dev:.2%} std={std_dev:.2%} beta={beta_dev:.3f} time={elapsed:.2f}s")


def _determinism_run():
    params = tf.fit_period_params(_monthly_matrix())
    synth = tf.generate_monthly(params, 50, seed=9001).flows
    init = nn.init_params(nn.NetworkConfig(), seed=42)
    series = seasonal_inflow(years=3, noise=0.05, phi=0.5)
    split = SplitSpec(range(0, 730), range(730, 900), range(900, len(series)))
    prep = prepare(series, 3, split=split)
    net, report = nn.fit(init, prep.train, prep.validation, nn.TrainConfig(epochs=20), prep.test)
    svg = svg_line_chart([series.values, (3, denormalize(nn.predict(net, prep.train), prep.scaler))], ["obs", "fit"])
    return synth.tobytes(), [p.tobytes() for p in init.parameters()], nn.save_checkpoint(net, prep.scaler), svg


def test_05_determinism():
    t0 = time.perf_counter()
    a, b = _determinism_run(), _determinism_run()
    elapsed = time.perf_counter() - t0
    same = [a[i] == b[i] for i in range(4)]
    verdict(5, "bit-identical reruns", all(same),
            f"synthetic={same[0]} init={same[1]} checkpoint={same[2]} svg={same[3]} time={elapsed:.1f}s")


def test_06_learnability():
    t0 = time.perf_counter()
    series = seasonal_inflow(years=10, noise=0.0)
    n = len(series)
    split = SplitSpec(range(0, 6 * 365), range(6 * 365, 7 * 365), range(7 * 365, n))
    prep = prepare(series, 3, split=split)
    net, report = nn.fit(nn.init_params(nn.NetworkConfig(), seed=42), prep.train, prep.validation,
                         nn.TrainConfig(), prep.test)
    elapsed = time.perf_counter() - t0
    final = report.test[-1]
    ok = final["epoch"] == 100 and final["rmse"] < 0.05 and elapsed < 120
    verdict(6, "learnability on a sinusoid", ok, f"test_rmse={final['rmse']:.4f} r2={final['r2']:.4f} time={elapsed:.1f}s")


def test_07_anomaly():
    t0 = time.perf_counter()
    series = seasonal_inflow(years=8, amplitude=8000.0, noise=0.1, phi=0.0, seed=7)
    split = SplitSpec(range(0, 5 * 365), range(5 * 365, 6 * 365), range(6 * 365, len(series)))
    prep = prepare(series, 3, split=split)
    net, _ = nn.fit(nn.init_params(nn.NetworkConfig(), seed=42), prep.train, prep.validation,
                    nn.TrainConfig(epochs=60, learning_rate=3e-3))
    tau = calibrate_tau(net, prep.validation)
    cfg = AnomalyConfig(k=7, rho=2.0, tau=tau)

    def scaled(f):
        v = series.values.copy()
        v[-7:] *= f
        return DailySeries(series.start_date, v)

    kinds = {name: detect(net, scaled(f), cfg, prep.scaler).kind for name, f in (("plain", 1), ("spike", 5), ("deficit", 0.1))}
    # boundary: tau chosen so the observed RMSE equals tau * rho exactly
    err = detect(net, series, cfg, prep.scaler).observed_rmse
    boundary = detect(net, series, AnomalyConfig(7, 2.0, err / 2), prep.scaler)
    elapsed = time.perf_counter() - t0
    ok = (kinds == {"plain": NONE, "spike": FLOOD, "deficit": DROUGHT} and boundary.kind == NONE
          and boundary.observed_rmse == boundary.tau * boundary.rho and elapsed < 10)
    verdict(7, "anomaly verdicts", ok, f"tau={tau:.4f} {kinds} boundary={boundary.kind} time={elapsed:.1f}s")


def test_08_metric_oracles():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(10, 300))
        o, p = rng.normal(size=n), rng.normal(size=n)
        errs = [abs(rmse(p, o) - oracles.rmse(p.tolist(), o.tolist())),
                abs(r_squared(p, o) - oracles.r_squared(p.tolist(), o.tolist()))]
        for k in (1, 2, 3):
            errs.append(abs(autocorrelation(o, k) - oracles.autocorrelation(o.tolist(), k)))
        st, ref = descriptive_stats(o).to_dict(), oracles.moments(o.tolist())
        errs += [abs(st[key] - ref[key]) for key in ref]
        worst = max(worst, max(errs))
    verdict(8, "metric oracles", worst < 1e-10, f"max_abs_err={worst:.1e}")


def test_09_reservoir():
    f1 = reservoir.reservoir_factor(reservoir.ReservoirAccount(100, 100, 200))
    f2 = reservoir.reservoir_factor(reservoir.ReservoirAccount(300, 100, 200))
    add = (reservoir.total_daily_release(3.0, 5.0) == 8.0
           and reservoir.total_daily_release(0.0, 7.5) == 7.5 == reservoir.total_daily_release(7.5, 0.0))

    def rel(day, elev):
        return [c.relation for c in reservoir.check_rule_curve(day, elev)]

    curve = [rel(dt.date(2020, 7, 31), 1649), rel(dt.date(2020, 7, 20), 1655), rel(dt.date(2020, 8, 25), 1680)]
    ok = (f1 == (1.0, True) and f2 == (2.0, False) and add
          and curve == [[], ["not_exceed_by"], ["not_reach_before"]])
    verdict(9, "reservoir formulas", ok, f"factors={f1},{f2} additivity={add} curve={curve}")


def _real_series():
    path = os.environ.get(REAL_DATA_ENV)
    if not path:
        pytest.skip(f"set {REAL_DATA_ENV} to a daily inflow CSV to run the real-data checks")
    with open(path, "rb") as f:
        return load_daily_series(f)


def test_10_real_data_statistics():
    series = _real_series()
    tr = split_series(series).train
    st = descriptive_stats(series.values[tr.start:tr.stop])
    checks = {
        "min": st.min == 3101,
        "max": st.max == 149075,
        "mean": abs(st.mean - 19226.518) <= 1e-3,
        "r1": abs(st.r1 - 0.974) <= 1e-3,
        "skewness": abs(st.skewness / 1.486 - 1) <= 0.10,
        "kurtosis": abs(st.kurtosis / 2.314 - 1) <= 0.10,
    }
    verdict(10, "real-data training statistics", all(checks.values()),
            f"min={st.min} max={st.max} mean={st.mean:.3f} r1={st.r1:.4f} skew={st.skewness:.3f} "
            f"kurt={st.kurtosis:.3f} failed={[k for k, v in checks.items() if not v]}")


def test_10b_real_data_training():
    series = _real_series()
    prep = prepare(series)
    net, report = nn.fit(nn.init_params(nn.NetworkConfig(), seed=42), prep.train, prep.validation,
                         nn.TrainConfig(), prep.test)
    final = report.test[-1]
    ev = evaluate(nn.predict(net, prep.test), prep.test.targets)
    verdict(10, "real-data test split", ev.rmse <= 0.05 and ev.r_squared >= 0.90,
            f"epoch={final['epoch']} rmse={ev.rmse:.4f} r2={ev.r_squared:.4f}")
