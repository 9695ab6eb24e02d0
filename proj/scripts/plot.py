#!/usr/bin/env python3
"""Plot fdde-atlas CSV output.

The plot kind is picked from the CSV header:
  t,x                      trajectory
  alpha,tau                stability boundary (stable below the curve)
  time,mean_log_distance   divergence curve with the fitted slope window
  x,x_delayed              delay attractor

Usage: plot.py FILE.csv [FILE.csv ...] [-o out.png] [--fit-range MIN MAX]
"""

import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

LABELS = {
    ("t", "x"): ("t", "x(t)", "-"),
    ("alpha", "tau"): ("alpha", "tau", "-"),
    ("time", "mean_log_distance"): ("time", "<ln d>", "-"),
    ("x", "x_delayed"): ("x(t)", "x(t - tau)", ","),
}


def read(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    header = tuple(rows[0])
    if header not in LABELS:
        raise SystemExit(f"{path}: unrecognised header {','.join(header)}")
    cols = list(zip(*((float(a), float(b)) for a, b in rows[1:])))
    return header, cols


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("files", nargs="+")
    p.add_argument("-o", "--out", default="plot.png")
    p.add_argument("--fit-range", nargs=2, type=int, metavar=("MIN", "MAX"))
    args = p.parse_args()

    fig, ax = plt.subplots(figsize=(7, 4.5))
    header = None
    for path in args.files:
        h, (xs, ys) = read(path)
        if header and h != header:
            raise SystemExit("all files must have the same header")
        header = h
        style = LABELS[h][2]
        ax.plot(xs, ys, style, lw=0.8, label=path)
        if h == ("time", "mean_log_distance") and args.fit_range:
            lo, hi = args.fit_range
            ax.axvspan(xs[lo], xs[hi], alpha=0.15)
        if h == ("alpha", "tau"):
            ax.fill_between(xs, 0, ys, alpha=0.1)
    xl, yl, _ = LABELS[header]
    ax.set_xlabel(xl)
    ax.set_ylabel(yl)
    if len(args.files) > 1:
        ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
