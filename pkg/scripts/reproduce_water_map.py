#!/usr/bin/env python3
"""Regenerate the water-absorption-limited advantage map (out/water_map.csv).

Uses the bundled pure-water table at a 15 um path length and room
temperature; pass --absorption <csv> through to substitute another medium.
"""

import pathlib
import sys

from qcomb.cli import main as qcomb_main

OUT_DIR = pathlib.Path(__file__).resolve().parent.parent / "out"

if __name__ == "__main__":
    OUT_DIR.mkdir(exist_ok=True)
    out = OUT_DIR / "water_map.csv"
    code = qcomb_main(["water", "--out", str(out), "--plot", *sys.argv[1:]])
    if code != 0:
        sys.exit(code)
    print(f"wrote {out}")
