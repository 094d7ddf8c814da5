"""End-to-end run on a synthetic 20-year record: stats, train, evaluate, generate, anomaly, plot.

    python3 scripts/synthetic_demo.py [--out DIR] [--epochs N]
"""

import argparse
import json
from pathlib import Path

from inflowcast.cli import main as cli
from inflowcast.ingest import DailySeries, dump_daily_series
from inflowcast.synthetic import seasonal_inflow


def run(*argv):
    code = cli([str(a) for a in argv])
    print(f"$ inflowcast {' '.join(map(str, argv))}  -> exit {code}")
    return code


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="demo_out")
    ap.add_argument("--epochs", type=int, default=100)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    series = seasonal_inflow(years=20, noise=0.15, phi=0.8)
    record = out / "inflow.csv"
    record.write_text(dump_daily_series(series))

    run("stats", "--input", record, "--output", out / "stats.json")
    run("train", "--input", record, "--output", out / "model.json", "--epochs", args.epochs,
        "--plot", out / "fit.svg")
    report = json.loads((out / "model.json.report.json").read_text())
    print(f"final test: {report['test'][-1]}  calibrated tau: {report['tau']:.4f}")

    run("evaluate", "--checkpoint", out / "model.json", "--input", record, "--output", out / "evaluate.json")
    for name, r in json.loads((out / "evaluate.json").read_text())["results"].items():
        print(f"  {name:11s} rmse={r.get('rmse', float('nan')):.4f} r2={r.get('r2')}")

    run("generate", "--input", record, "--years", 5, "--output", out / "synthetic.csv")
    run("plot", "--input", record, "--input", out / "synthetic.csv", "--label", "observed",
        "--label", "thomas-fiering", "--output", out / "synthetic.svg")

    tau = repr(report["tau"])
    for tag, factor in (("plain", 1.0), ("spike", 5.0), ("deficit", 0.1)):
        v = series.values.copy()
        v[-7:] *= factor
        path = out / f"tail_{tag}.csv"
        path.write_text(dump_daily_series(DailySeries(series.start_date, v)))
        run("anomaly", "--checkpoint", out / "model.json", "--input", path, "--tau", tau)


if __name__ == "__main__":
    main()
