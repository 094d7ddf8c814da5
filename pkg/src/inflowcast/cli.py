"""Batch command line: stats, generate, train, evaluate, forecast, anomaly, reservoir, plot.

Exit codes: 0 success (or no anomaly), 1 usage error, 2 data error,
10 flood, 11 drought.
"""

import argparse
import datetime as dt
import json
import sys

import numpy as np

from . import anomaly, baselines, nn, reservoir
from . import thomas_fiering as tf
from .ingest import DataError, DailySeries, denormalize, dump_daily_series, load_daily_series, normalize, split_series
from .metrics import descriptive_stats, evaluate
from .pipeline import one_step_predictions, prepare
from .plot import emit_plot
from .rng import DEFAULT_SEED

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_FLOOD, EXIT_DROUGHT = 0, 1, 2, 10, 11
TRAIN_SEED = 42


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _read_series(path):
    with open(path, "rb") as f:
        return load_daily_series(f)


def _read_checkpoint(path):
    with open(path, "rb") as f:
        return nn.load_checkpoint(f.read())


def _emit_json(doc, path):
    text = json.dumps(doc, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _stats_table(blocks):
    names = list(blocks)
    fields = ["min", "max", "mean", "std_dev", "kurtosis", "skewness", "r1", "r2", "r3"]
    lines = ["parameter".ljust(12) + "".join(n.rjust(16) for n in names)]
    for key in fields:
        cells = []
        for n in names:
            v = blocks[n][key]
            cells.append(("-" if v is None else f"{v:.3f}").rjust(16))
        lines.append(key.ljust(12) + "".join(cells))
    return "\n".join(lines) + "\n"


def cmd_stats(args):
    series = _read_series(args.input)
    split = split_series(series)
    blocks = {}
    for name in ("train", "validation", "test"):
        idx = getattr(split, name)
        blocks[name] = descriptive_stats(series.values[idx.start:idx.stop]).to_dict()
    doc = {"split": split.to_dict(), "start_date": series.start_date.isoformat(), **blocks}
    sys.stdout.write(_stats_table(blocks))
    _emit_json(doc, args.output)
    return EXIT_OK


def cmd_train(args):
    series = _read_series(args.input)
    hidden = tuple(int(h) for h in args.hidden.split(","))
    config = nn.NetworkConfig(args.lookback, hidden, args.batch, args.candidate)
    prep = prepare(series, args.lookback, args.scaler_fit)
    cfg = nn.TrainConfig(args.epochs, args.lr, args.optimizer, seed=args.seed)
    net = nn.init_params(config, args.seed)

    def log(epoch, report):
        if args.verbose:
            print(f"epoch {epoch:4d}  train mse {report.train_loss[-1]:.6f}", file=sys.stderr)

    net, report = nn.fit(net, prep.train, prep.validation, cfg, prep.test, log=log)
    with open(args.output, "wb") as f:
        f.write(nn.save_checkpoint(net, prep.scaler))
    doc = {
        "config": config.to_dict(),
        "train": {k: getattr(cfg, k) for k in ("epochs", "learning_rate", "optimizer", "validation_every", "test_every", "seed")},
        "param_count": nn.param_count(config),
        "scaler": prep.scaler.to_dict(),
        "split": prep.split.to_dict(),
        "tau": anomaly.calibrate_tau(net, prep.validation),
        **report.to_dict(),
    }
    _emit_json(doc, args.report or args.output + ".report.json")
    if args.plot:
        _fit_plot(net, series, prep, args.plot)
    return EXIT_OK


def _fit_plot(net, series, prep, path):
    norm = prep.normalized.values
    s_tr, p_tr = one_step_predictions(net, norm, 0, prep.split.validation.stop)
    s_te, p_te = one_step_predictions(net, norm, prep.split.test.start, len(series))
    emit_plot(
        [series.values, (s_tr, denormalize(p_tr, prep.scaler)), (s_te, denormalize(p_te, prep.scaler))],
        ["observed", "train prediction", "test prediction"],
        path,
        title="Observed inflow and one-step LSTM predictions",
    )


def cmd_evaluate(args):
    series = _read_series(args.input)
    net, scaler = _read_checkpoint(args.checkpoint)
    if scaler is None:
        raise DataError("checkpoint carries no scaler")
    if args.eval_start:
        start = dt.date.fromisoformat(args.eval_start)
    else:
        start = series.start_date + dt.timedelta(days=split_series(series).test.start)
    i0 = series.index_of(start)
    n_days = args.days
    if i0 < net.config.lookback or i0 + n_days > len(series):
        raise DataError(f"evaluation window {start} + {n_days} days does not fit the series with history")
    dates = [start + dt.timedelta(days=i) for i in range(n_days)]
    norm = normalize(series, scaler).values
    observed = norm[i0:i0 + n_days]
    _, lstm = one_step_predictions(net, norm, i0, i0 + n_days)

    def score(pred_raw, obs_raw):
        return evaluate(normalize(pred_raw, scaler).values, normalize(obs_raw, scaler).values).to_dict()

    results = {"lstm_daily": evaluate(lstm, observed).to_dict()}
    try:
        train = split_series(series).train
        history = series.slice(range(0, min(train.stop, i0)))
    except DataError:
        history = series.slice(range(0, i0))
    for name, fn in (("tf_monthly", baselines.tf_monthly_forecast), ("tf_daily", baselines.tf_daily_forecast)):
        try:
            results[name] = score(*fn(series, start, n_days, args.tf_mode, args.seed))
        except ValueError as exc:
            results[name] = {"error": str(exc)}
    try:
        results["ten_daily"] = score(baselines.ten_daily_forecast(history, dates), series.values[i0:i0 + n_days])
    except ValueError as exc:
        results["ten_daily"] = {"error": str(exc)}
    doc = {
        "eval_start": start.isoformat(),
        "eval_end": dates[-1].isoformat(),
        "days": n_days,
        "tf_mode": args.tf_mode,
        "seed": args.seed,
        "results": results,
    }
    _emit_json(doc, args.output)
    return EXIT_OK


def cmd_forecast(args):
    series = _read_series(args.input)
    net, scaler = _read_checkpoint(args.checkpoint)
    lb = net.config.lookback
    if len(series) < lb:
        raise DataError(f"need at least {lb} days of history")
    norm = normalize(series, scaler).values
    pred = nn.rollout(net, norm[-lb:], args.k)
    dates = [series.end_date + dt.timedelta(days=i + 1) for i in range(args.k)]
    doc = {
        "issued_after": series.end_date.isoformat(),
        "k": args.k,
        "forecast": [
            {"date": d.isoformat(), "normalized": float(p), "inflow": float(v)}
            for d, p, v in zip(dates, pred, denormalize(pred, scaler))
        ],
    }
    _emit_json(doc, args.output)
    return EXIT_OK


def cmd_generate(args):
    seed = DEFAULT_SEED if args.seed is None else args.seed
    if args.params:
        with open(args.params, encoding="utf-8") as f:
            params = tf.PeriodParams.from_dict(json.load(f))
    elif args.input:
        series = _read_series(args.input)
        if args.monthly:
            params = tf.fit_period_params(tf.yearly_matrix(series, monthly=True)[1])
        else:
            params = tf.fit_daily_params(series)
    else:
        raise UsageError("generate needs --input or --params")
    if params.period_count not in (12, 366):
        raise DataError("parameters must have 12 or 366 periods")
    if args.save_params:
        with open(args.save_params, "w", encoding="utf-8") as f:
            f.write(params.dumps() + "\n")
    comment = f"thomas-fiering synthetic inflow, periods={params.period_count}, years={args.years}, seed={seed}"
    if args.years == 0:
        text = f"# {comment}\ndate,inflow\n"
    else:
        if params.period_count == 366:
            synth = tf.generate_daily(params, args.years, seed, args.start_year)
        else:
            synth = tf.generate_monthly(params, args.years, seed)
        text = dump_daily_series(tf.synthetic_to_daily_series(synth, params, args.start_year), comment)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_anomaly(args):
    series = _read_series(args.input)
    net, scaler = _read_checkpoint(args.checkpoint)
    if scaler is None:
        raise DataError("checkpoint carries no scaler")
    cfg = anomaly.AnomalyConfig(args.k, args.rho, args.tau)
    verdict = anomaly.detect(net, series, cfg, scaler)
    _emit_json(verdict.to_dict(), args.output)
    return {anomaly.NONE: EXIT_OK, anomaly.FLOOD: EXIT_FLOOD, anomaly.DROUGHT: EXIT_DROUGHT}[verdict.kind]


def cmd_reservoir(args):
    doc = {}
    if args.indent is not None:
        account = reservoir.ReservoirAccount(args.storage, args.inflow, args.indent)
        factor, effective = reservoir.reservoir_factor(account)
        release = reservoir.daily_release_from_storage(args.storage, args.indent)
        doc["reservoir_factor"] = {"factor": factor, "effective": effective}
        doc["daily_release_from_storage"] = {"value": release, "basis": "storage / remaining indent (literal)"}
        if args.remaining_days is not None:
            per_day = reservoir.daily_release_per_day(args.storage, args.remaining_days)
            doc["daily_release_per_day"] = {"value": per_day, "basis": "storage / remaining days"}
        if args.predicted_inflow is not None:
            base = doc.get("daily_release_per_day", doc["daily_release_from_storage"])["value"]
            doc["total_daily_release"] = reservoir.total_daily_release(base, args.predicted_inflow)
    if args.elevation is not None:
        curve = reservoir.BHAKRA_RULE_CURVE
        if args.rule_curve:
            with open(args.rule_curve, encoding="utf-8") as f:
                curve = reservoir.RuleCurve.loads(f.read())
        day = dt.date.fromisoformat(args.date) if args.date else dt.date(2000, 1, 1)
        violations = reservoir.check_rule_curve(day, args.elevation, curve)
        doc["rule_curve"] = {
            "date": day.isoformat(),
            "elevation_ft": args.elevation,
            "violations": [c.to_dict() for c in violations],
        }
    if not doc:
        raise UsageError("reservoir needs --indent (with --storage/--inflow) and/or --elevation")
    _emit_json(doc, args.output)
    return EXIT_OK


def cmd_plot(args):
    series_list, labels = [], []
    first = None
    for i, path in enumerate(args.input):
        s = _read_series(path)
        first = first or s
        off = (s.start_date - first.start_date).days
        series_list.append((off, s.values))
        labels.append(args.label[i] if args.label and i < len(args.label) else path)
    if args.checkpoint:
        net, scaler = _read_checkpoint(args.checkpoint)
        norm = normalize(first, scaler).values
        start, pred = one_step_predictions(net, norm, 0, len(first))
        series_list.append((start, denormalize(pred, scaler)))
        labels.append("LSTM one-step prediction")
    emit_plot(series_list, labels, args.output, title=args.title or "")
    return EXIT_OK


def build_parser():
    p = _Parser(prog="inflowcast", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("stats", help="descriptive statistics per train/validation/test split")
    s.add_argument("--input", required=True)
    s.add_argument("--output")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("train", help="train the stacked LSTM and write a checkpoint")
    s.add_argument("--input", required=True)
    s.add_argument("--output", required=True, help="checkpoint path")
    s.add_argument("--report", help="training report JSON (default: <output>.report.json)")
    s.add_argument("--lookback", type=int, default=3)
    s.add_argument("--batch", type=int, default=15)
    s.add_argument("--epochs", type=int, default=100)
    s.add_argument("--lr", type=float, default=1e-3)
    s.add_argument("--optimizer", choices=("adam", "sgd"), default="adam")
    s.add_argument("--hidden", default="4,4", help="comma-separated layer sizes")
    s.add_argument("--candidate", choices=("tanh", "sigmoid"), default="tanh")
    s.add_argument("--scaler-fit", choices=("train", "full"), default="train")
    s.add_argument("--seed", type=int, default=TRAIN_SEED)
    s.add_argument("--plot", help="write an SVG of observed vs predicted inflow")
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("evaluate", help="LSTM vs Thomas-Fiering vs 10-daily baseline")
    s.add_argument("--checkpoint", required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--eval-start", help="YYYY-MM-DD (default: first test day)")
    s.add_argument("--days", type=int, default=365)
    s.add_argument("--tf-mode", choices=("synthetic", "conditional"), default="synthetic")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--output")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("forecast", help="k-step recursive forecast past the end of the input")
    s.add_argument("--checkpoint", required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--k", type=int, default=7)
    s.add_argument("--output")
    s.set_defaults(func=cmd_forecast)

    s = sub.add_parser("generate", help="Thomas-Fiering synthetic inflow CSV")
    s.add_argument("--input", help="daily CSV to fit parameters from")
    s.add_argument("--params", help="PeriodParams JSON")
    s.add_argument("--monthly", action="store_true", help="fit 12 monthly periods instead of 366 daily")
    s.add_argument("--years", type=int, required=True)
    s.add_argument("--seed", type=int, default=None, help=f"default {DEFAULT_SEED}")
    s.add_argument("--start-year", type=int, default=2000)
    s.add_argument("--save-params")
    s.add_argument("--output")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("anomaly", help="flood/drought check on the last k days")
    s.add_argument("--checkpoint", required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--k", type=int, default=7)
    s.add_argument("--rho", type=float, default=2.0)
    s.add_argument("--tau", type=float, default=0.03)
    s.add_argument("--output")
    s.set_defaults(func=cmd_anomaly)

    s = sub.add_parser("reservoir", help="reservoir factor, release policy, rule-curve check")
    s.add_argument("--storage", type=float, default=0.0)
    s.add_argument("--inflow", type=float, default=0.0, help="total inflow expected over the remaining period")
    s.add_argument("--indent", type=float, help="total indent over the remaining period")
    s.add_argument("--remaining-days", type=float)
    s.add_argument("--predicted-inflow", type=float, help="forecast inflow for the day")
    s.add_argument("--date")
    s.add_argument("--elevation", type=float, help="reservoir level, ft")
    s.add_argument("--rule-curve", help="rule-curve JSON (default: Bhakra)")
    s.add_argument("--output")
    s.set_defaults(func=cmd_reservoir)

    s = sub.add_parser("plot", help="SVG line chart of one or more inflow CSVs")
    s.add_argument("--input", action="append", required=True)
    s.add_argument("--label", action="append")
    s.add_argument("--checkpoint", help="overlay one-step predictions on the first input")
    s.add_argument("--title")
    s.add_argument("--output", required=True)
    s.set_defaults(func=cmd_plot)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        for name in ("lookback", "batch", "epochs", "k", "years", "days"):
            v = getattr(args, name, None)
            if v is not None and v < (0 if name == "years" else 1):
                raise UsageError(f"--{name} out of range: {v}")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ValueError, OSError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
