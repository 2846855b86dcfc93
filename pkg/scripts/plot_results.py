#!/usr/bin/env python3
"""Render max-min rate curves from a simulate CSV (one line per scheme).

Usage: python scripts/plot_results.py results.csv [out.png]
Not part of the tested surface; the CSV is the product.
"""

import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main(argv):
    if not 2 <= len(argv) <= 3:
        print(__doc__)
        return 2
    path = argv[1]
    out = argv[2] if len(argv) == 3 else path.rsplit(".", 1)[0] + ".png"
    curves = defaultdict(list)
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            curves[row["scheme"]].append(
                (float(row["snr_db"]), float(row["maxmin_rate_bps_hz"])))
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for scheme in sorted(curves):
        pts = sorted(curves[scheme])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                label=scheme)
    ax.set_xlabel("min-gain user SNR (dB)")
    ax.set_ylabel("max-min rate (bits/s/Hz)")
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
