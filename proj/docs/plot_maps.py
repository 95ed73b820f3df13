#!/usr/bin/env python3
"""Plot helpers for the CSV files emitted by the cld CLI.

The tool itself never renders images; these scripts consume its outputs.

  cld eval --family frank --theta 3 --grid 40 -o eval.csv
  python3 docs/plot_maps.py eval eval.csv r

  cld depmap --scenario parabola -n 250 --seed 1 -o labels.csv
  python3 docs/plot_maps.py depmap labels.csv
"""

import csv
import sys

import matplotlib.pyplot as plt


def load(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def plot_eval(path, field):
    rows = load(path)
    xs = sorted({float(r["u"]) for r in rows})
    ys = sorted({float(r["v"]) for r in rows})
    if len(rows) == len(xs):  # diagonal profile
        plt.plot([float(r["u"]) for r in rows], [float(r[field]) for r in rows])
        plt.xlabel("u = v")
        plt.ylabel(field)
    else:
        grid = [[0.0] * len(xs) for _ in ys]
        for r in rows:
            grid[ys.index(float(r["v"]))][xs.index(float(r["u"]))] = float(r[field])
        plt.pcolormesh(xs, ys, grid, shading="nearest")
        plt.colorbar(label=field)
        plt.xlabel("u")
        plt.ylabel("v")
    plt.title(field)
    plt.show()


def plot_depmap(path):
    rows = load(path)
    colors = {"positive": "red", "negative": "lightblue",
              "neutral": "lightgray", "low-density": "navy"}
    for r in rows:
        plt.scatter(float(r["x"]), float(r["y"]), c=colors[r["label"]],
                    marker="s", s=400)
    plt.xlabel("u")
    plt.ylabel("v")
    plt.title("dependence map")
    plt.show()


if __name__ == "__main__":
    if len(sys.argv) < 3:
        sys.exit(__doc__)
    if sys.argv[1] == "eval":
        plot_eval(sys.argv[2], sys.argv[3] if len(sys.argv) > 3 else "r")
    elif sys.argv[1] == "depmap":
        plot_depmap(sys.argv[2])
    else:
        sys.exit(__doc__)
