"""Reproduction run on an observed daily record (e.g. Bhakra 1999-2018).

    python3 scripts/real_data.py PATH/TO/inflow.csv [--out DIR]

Prints the training-split statistics, the per-epoch test metrics and the
May 2018 - April 2019 comparison next to reference figures for that record.
"""

import argparse
import json
from pathlib import Path

from inflowcast.cli import main as cli

REFERENCE = {
    "train_stats": {"min": 3101, "max": 149075, "mean": 19226.518, "std_dev": 17161.079,
                    "kurtosis": 2.314, "skewness": 1.486, "r1": 0.974, "r2": 0.945, "r3": 0.926},
    "comparison": {"lstm_daily": (0.0503, 0.9389), "tf_monthly": (0.1207, 0.8933),
                   "tf_daily": (0.1420, 0.6766), "ten_daily": (0.2940, 0.6571)},
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("--out", default="real_out")
    ap.add_argument("--eval-start", default="2018-05-01")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if cli(["stats", "--input", args.csv, "--output", str(out / "stats.json")]):
        raise SystemExit("stats failed")
    train = json.loads((out / "stats.json").read_text())["train"]
    print(f"\n{'train stat':10s} {'ours':>12s} {'reference':>12s}")
    for k, ref in REFERENCE["train_stats"].items():
        print(f"{k:10s} {train[k]:12.3f} {ref:12.3f}")

    ck = out / "model.json"
    if cli(["train", "--input", args.csv, "--output", str(ck), "--plot", str(out / "fit.svg")]):
        raise SystemExit("train failed")
    for row in json.loads((out / "model.json.report.json").read_text())["test"]:
        print(f"epoch {row['epoch']:3d}  test rmse {row['rmse']:.4f}  r2 {row['r2']}")

    if cli(["evaluate", "--checkpoint", str(ck), "--input", args.csv, "--eval-start", args.eval_start,
            "--output", str(out / "evaluate.json")]):
        raise SystemExit("evaluate failed")
    results = json.loads((out / "evaluate.json").read_text())["results"]
    print(f"\n{'method':11s} {'rmse':>8s} {'r2':>8s} {'ref rmse':>9s} {'ref r2':>8s}")
    for name, (rr, r2) in REFERENCE["comparison"].items():
        got = results[name]
        print(f"{name:11s} {got.get('rmse', float('nan')):8.4f} {got.get('r2') or float('nan'):8.4f} {rr:9.4f} {r2:8.4f}")


if __name__ == "__main__":
    main()
