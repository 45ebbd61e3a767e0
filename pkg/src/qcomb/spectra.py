"""Absorption tables, Lambert-law transmissivity and loss-limited advantage.

A bundled pure-water absorption table (``data/water_absorption.csv``,
assembled from the published Pope & Fry / Kou et al. / Hale & Querry
datasets, stored in 1/um) ships as the default medium; any two-column CSV
with header ``wavelength_um,alpha_per_um`` can be substituted, so other
solvents or gases are drop-in.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from .dualcomb import DualCombConfig, Environment, LOPath, SampleResponse, snr_fundamental
from .errors import ExtrapolationError, TableFormatError
from .gaussian import SqueezeGain

__all__ = [
    "AbsorptionTable",
    "load_absorption_table",
    "load_default_water_table",
    "transmissivity",
    "water_limited_advantage",
    "ROOM_TEMPERATURE_K",
    "UNIT_FACTORS",
]

ROOM_TEMPERATURE_K = 295.0

EXPECTED_HEADER = ("wavelength_um", "alpha_per_um")

# Conversion into 1/um from the declared source unit of the alpha column.
UNIT_FACTORS = {"per_um": 1.0, "per_cm": 1e-4, "per_m": 1e-6}


@dataclass(frozen=True, eq=False)
class AbsorptionTable:
    """Lambert absorption coefficients on a strictly increasing wavelength grid."""

    wavelength_um: np.ndarray
    alpha_per_um: np.ndarray
    source_units: str = "per_um"
    source: str = "<memory>"

    def __post_init__(self) -> None:
        wl = np.asarray(self.wavelength_um, dtype=float)
        al = np.asarray(self.alpha_per_um, dtype=float)
        if wl.ndim != 1 or wl.shape != al.shape:
            raise TableFormatError("wavelength and alpha columns must be 1-D and equal length")
        if wl.size < 2:
            raise TableFormatError("at least 2 rows are required for interpolation")
        if np.any(np.diff(wl) <= 0.0):
            raise TableFormatError("wavelengths must be strictly increasing")
        if np.any(al < 0.0):
            raise TableFormatError("absorption coefficients must be >= 0")
        wl.setflags(write=False)
        al.setflags(write=False)
        object.__setattr__(self, "wavelength_um", wl)
        object.__setattr__(self, "alpha_per_um", al)

    def __len__(self) -> int:
        return self.wavelength_um.size

    def alpha(self, wavelength_um):
        """Linearly interpolated absorption coefficient (1/um); no extrapolation."""
        wl = np.asarray(wavelength_um, dtype=float)
        lo, hi = self.wavelength_um[0], self.wavelength_um[-1]
        if np.any(wl < lo) or np.any(wl > hi):
            raise ExtrapolationError(
                f"wavelength outside tabulated range [{lo}, {hi}] um"
            )
        out = np.interp(wl, self.wavelength_um, self.alpha_per_um)
        return float(out) if out.ndim == 0 else out


def load_absorption_table(path, unit_spec: str = "per_um") -> AbsorptionTable:
    """Read a two-column absorption CSV, converting alpha into 1/um.

    The file must carry the header ``wavelength_um,alpha_per_um``;
    ``unit_spec`` declares the actual unit of the alpha column
    (``per_um``, ``per_cm`` or ``per_m``) and the conversion is applied on
    load.  Malformed rows raise :class:`TableFormatError` naming the line.
    """
    if unit_spec not in UNIT_FACTORS:
        raise ValueError(f"unit_spec must be one of {sorted(UNIT_FACTORS)}, got {unit_spec!r}")
    factor = UNIT_FACTORS[unit_spec]
    wavelengths: list[float] = []
    alphas: list[float] = []
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = None
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            cells = [cell.strip() for cell in row]
            if header is None:
                if tuple(cells) != EXPECTED_HEADER:
                    raise TableFormatError(
                        f"line {lineno}: expected header {','.join(EXPECTED_HEADER)!r}, "
                        f"got {','.join(cells)!r}"
                    )
                header = cells
                continue
            if len(cells) != 2:
                raise TableFormatError(f"line {lineno}: expected 2 columns, got {len(cells)}")
            try:
                wl, al = float(cells[0]), float(cells[1])
            except ValueError as exc:
                raise TableFormatError(f"line {lineno}: non-numeric value ({exc})") from exc
            if wavelengths and wl <= wavelengths[-1]:
                raise TableFormatError(
                    f"line {lineno}: wavelength {wl} not strictly increasing"
                )
            if al < 0.0:
                raise TableFormatError(f"line {lineno}: negative absorption {al}")
            wavelengths.append(wl)
            alphas.append(al * factor)
    if header is None:
        raise TableFormatError("line 1: empty file, header row missing")
    if len(wavelengths) < 2:
        raise TableFormatError("at least 2 data rows are required for interpolation")
    return AbsorptionTable(
        wavelength_um=np.array(wavelengths),
        alpha_per_um=np.array(alphas),
        source_units=unit_spec,
        source=str(path),
    )


def default_water_table_path():
    """Filesystem path of the bundled pure-water absorption table."""
    return resources.files("qcomb").joinpath("data/water_absorption.csv")


def load_default_water_table() -> AbsorptionTable:
    with resources.as_file(default_water_table_path()) as path:
        return load_absorption_table(path, unit_spec="per_um")


def transmissivity(table: AbsorptionTable, wavelength_um: float, path_length_um: float) -> float:
    """Lambert-law transmissivity ``exp(-alpha(lambda) * L)``."""
    if path_length_um < 0.0:
        raise ValueError("path length must be >= 0")
    return float(np.exp(-table.alpha(wavelength_um) * path_length_um))


def water_limited_advantage(
    table: AbsorptionTable,
    wavelength_um: float,
    path_length_um: float,
    gain: SqueezeGain,
    gamma: float = 5.0,
    env: Optional[Environment] = None,
) -> float:
    """Loss-limited quantum advantage (amplitude-SNR dB) at one wavelength.

    Both combs joint-squeezed at ``gain`` versus the classical source, with
    no detector noise, matched phase, and the sample absorption applied to
    the signal path only (the LO does not traverse the sample).  Thermal
    occupation at the carrier is mixed in; the default environment is room
    temperature (295 K).  The result is independent of line count and
    absolute power, so a small internal configuration carries the evaluation.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if env is None:
        env = Environment(ROOM_TEMPERATURE_K)
    kappa = transmissivity(table, wavelength_um, path_length_um)
    if kappa == 0.0:
        warnings.warn("fully opaque sample: both SNRs vanish, advantage reported as 0 dB")
        return 0.0
    base = dict(
        n_lines=4,
        rep_rate=1e8,
        rep_offset=1e3,
        acquisition_time=1.0,
        signal_power=1e-6,
        lo_power=gamma * 1e-6,
        wavelength=wavelength_um * 1e-6,
    )
    sample = SampleResponse(transmissivity=kappa)
    lo = LOPath()
    snr_q = snr_fundamental(
        DualCombConfig(signal_gain=gain, lo_gain=gain, **base), sample, lo, env, 1
    )
    snr_c = snr_fundamental(DualCombConfig(**base), sample, lo, env, 1)
    return 10.0 * math.log10(snr_q / snr_c)
