#!/usr/bin/env python3
"""Regenerate the power-ratio advantage map and the total-power diagonal scan.

out/advantage_map.csv: ideal advantage over (gamma, transmissivity) with the
signal comb squeezed 10 dB (swap which comb is squeezed with --set overrides).
out/total_power_scan.csv: fixed-total-power diagonal with eta = kappa showing
the SNR optimum at equal signal and LO power.
"""

import pathlib
import sys

from qcomb.cli import main as qcomb_main

OUT_DIR = pathlib.Path(__file__).resolve().parent.parent / "out"

if __name__ == "__main__":
    OUT_DIR.mkdir(exist_ok=True)
    jobs = [
        ("advantage_map.csv", ["sweep", "--preset", "fig3"]),
        ("total_power_scan.csv", ["sweep", "--preset", "fig4"]),
    ]
    for name, argv in jobs:
        out = OUT_DIR / name
        code = qcomb_main([*argv, "--out", str(out), "--plot"])
        if code != 0:
            sys.exit(code)
        print(f"wrote {out}")
