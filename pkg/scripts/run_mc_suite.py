#!/usr/bin/env python3
"""Run the Monte-Carlo verification battery over several configurations.

Sweeps the default classical config plus squeezed / lossy / thermal variants
and writes one CSV per configuration under out/.  Exits non-zero if any
check fails anywhere.
"""

import pathlib
import sys

from qcomb.cli import main as qcomb_main

OUT_DIR = pathlib.Path(__file__).resolve().parent.parent / "out"

VARIANTS = {
    "classical": [],
    "squeezed": ["--set", "comb.signal_gain_db=10", "--set", "comb.lo_gain_db=10"],
    "lossy_thermal": [
        "--set", "sample.transmissivity=0.5",
        "--set", "environment.temperature_k=3000",
    ],
    "mismatched_phase": ["--set", "sample.phase_rad=0.3"],
}

if __name__ == "__main__":
    OUT_DIR.mkdir(exist_ok=True)
    worst = 0
    for name, overrides in VARIANTS.items():
        out = OUT_DIR / f"mc_{name}.csv"
        code = qcomb_main(
            ["mc-verify", "--preset", "mc-default", "--seed", "42", *overrides,
             "--out", str(out)]
        )
        print(f"{name}: exit {code} -> {out}")
        worst = max(worst, code)
    sys.exit(worst)
