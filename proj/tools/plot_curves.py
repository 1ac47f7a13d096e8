#!/usr/bin/env python3
"""Plot the curve CSV files that `qlab run` writes next to its reports.

Each file has one header row naming the two columns (with units in square
brackets) and numeric rows below. Example:

    python3 tools/plot_curves.py out/quantum_zeno_*.csv --log-y -o zeno.png
"""

import argparse
import csv
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load_curve(path):
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader)
        if len(header) != 2:
            raise ValueError(f"{path}: expected two columns, got {header}")
        xs, ys = [], []
        for row in reader:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
    return header, xs, ys


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv_files", nargs="+", type=pathlib.Path)
    parser.add_argument("-o", "--output", type=pathlib.Path,
                        help="output image (default: first input with .png)")
    parser.add_argument("--log-y", action="store_true",
                        help="logarithmic vertical axis")
    args = parser.parse_args()

    fig, ax = plt.subplots(figsize=(7, 4.5))
    header = None
    for path in args.csv_files:
        header, xs, ys = load_curve(path)
        label = path.stem
        marker = "o" if len(xs) <= 32 else None
        ax.plot(xs, ys, marker=marker, markersize=3, label=label)

    ax.set_xlabel(header[0])
    ax.set_ylabel(header[1])
    if args.log_y:
        ax.set_yscale("log")
    if len(args.csv_files) > 1:
        ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()

    output = args.output or args.csv_files[0].with_suffix(".png")
    fig.savefig(output, dpi=150)
    print(f"wrote {output}")


if __name__ == "__main__":
    sys.exit(main())
