#!/usr/bin/env python3
"""Line plot of numeric CSV columns against one x column.

    factional sweep ... > sweep.csv
    python3 tools/plot_csv.py sweep.csv --x value --y mean_e_A mean_e_B -o sweep.png
"""
import argparse
import csv
import sys


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("--x", required=True)
    ap.add_argument("--y", nargs="+", required=True)
    ap.add_argument("-o", "--output", default="plot.png")
    args = ap.parse_args()

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is required for plotting")

    with open(args.csv, newline="") as f:
        rows = list(csv.DictReader(f))
    xs = [float(r[args.x]) for r in rows]
    for col in args.y:
        plt.plot(xs, [float(r[col]) for r in rows], marker="o", label=col)
    plt.xlabel(args.x)
    plt.legend()
    plt.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
