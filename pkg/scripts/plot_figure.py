#!/usr/bin/env python3
"""Render a preset CSV produced by `rectifi figure`.

Wide files (fig1b-style, one column group per mode) become line plots; long
files with a time column become contours; long steady-state files become a
single curve. Example:

    rectifi figure fig4c && python scripts/plot_figure.py fig4c.csv

Not part of the package or its tests; requires matplotlib.
"""

import sys
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np


def read_table(path):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    units = lines[0] if lines[0].startswith("#") else ""
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return units, header, rows


def main(path):
    units, header, rows = read_table(path)
    name = Path(path).stem
    if header[0] == "t":                      # wide time series
        data = np.array([[float(v) for v in row] for row in rows])
        for k, col in enumerate(header[1:], start=1):
            plt.plot(data[:, 0], data[:, k], label=col)
        plt.xlabel("t")
        plt.legend(fontsize=8)
    elif "t" in header:                       # long contour: axis, t, value
        axis = header[0]
        cols = {name: i for i, name in enumerate(header)}
        a = np.array([float(r[cols[axis]]) for r in rows])
        t = np.array([float(r[cols["t"]]) for r in rows])
        v = np.array([float(r[cols["I"]]) for r in rows])
        na, nt = len(np.unique(a)), len(np.unique(t))
        plt.pcolormesh(t.reshape(na, nt), a.reshape(na, nt),
                       v.reshape(na, nt), shading="auto")
        plt.colorbar(label="I")
        plt.xlabel("t")
        plt.ylabel(axis)
    else:                                     # long curve: axis, value(s)
        axis = header[0]
        a = np.array([float(r[0]) for r in rows])
        v = np.array([float(r[1]) for r in rows])
        plt.plot(a, v)
        plt.xlabel(axis)
        plt.ylabel(header[1])
    plt.title(f"{name}   {units.lstrip('# ')}", fontsize=8)
    out = Path(path).with_suffix(".png")
    plt.savefig(out, dpi=150, bbox_inches="tight")
    print(f"wrote {out}")


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    main(sys.argv[1])
