#!/usr/bin/env python3
"""Plot convergence curves from harness CSV traces.

Usage:
    python scripts/plot_traces.py OUT_DIR [--metric rel_gap] [--save fig.png]

Reads every ``*.csv`` in OUT_DIR that carries the trace schema
(stage,iter,oracle_calls,f_value,sqrt_rho,rel_gap,time_ms) and draws the
chosen metric against oracle calls on a log scale.  Summary and report files
are skipped automatically.
"""

import argparse
import csv
import pathlib
import sys

TRACE_HEADER = ["stage", "iter", "oracle_calls", "f_value", "sqrt_rho", "rel_gap", "time_ms"]


def load_trace(path):
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != TRACE_HEADER:
            return None
        calls, values = [], []
        rows = list(reader)
        for row in rows:
            calls.append(int(row[2]))
            values.append({name: float(row[i]) for i, name in enumerate(TRACE_HEADER)})
        return calls, values


def main():
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("out_dir", type=pathlib.Path)
    parser.add_argument("--metric", default="rel_gap",
                        choices=["rel_gap", "f_value", "sqrt_rho"])
    parser.add_argument("--save", type=pathlib.Path, default=None,
                        help="write the figure to this file instead of showing it")
    parser.add_argument("--floor", type=float, default=1e-16,
                        help="clip the metric at this value for the log axis")
    args = parser.parse_args()

    try:
        import matplotlib
        if args.save is not None:
            matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is required: pip install matplotlib")

    fig, ax = plt.subplots(figsize=(7, 5))
    plotted = 0
    for path in sorted(args.out_dir.glob("*.csv")):
        loaded = load_trace(path)
        if loaded is None:
            continue
        calls, rows = loaded
        series = [max(row[args.metric], args.floor) for row in rows]
        ax.plot(calls, series, label=path.stem, linewidth=1.2)
        plotted += 1

    if plotted == 0:
        sys.exit(f"no trace CSVs with the expected header found in {args.out_dir}")

    ax.set_xlabel("oracle calls")
    ax.set_ylabel(args.metric)
    ax.set_yscale("log")
    if args.metric == "rel_gap":
        ax.set_title("relative objective gap vs oracle calls")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()

    if args.save is not None:
        fig.savefig(args.save, dpi=150)
        print(f"wrote {args.save}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
