"""Dual-comb experiment model: mean heterodyne spectrum and readout noise.

The experiment interferes a signal comb (per-line amplitude ``A``, repetition
rate ``f_r + df_r``) with a local-oscillator comb (amplitude ``B``, rate
``f_r``) on a balanced detector.  Line ``m`` of the sample response appears at
the intermediate frequency ``m*df_r`` with mean
``sqrt(kappa_m eta_m) A_m B_m e^{i(alpha_m - beta_m)}``, while the readout
noise at that bin collects beat contributions from the sideband modes around
all ``N`` comb lines.  Per-line sideband pairs may be joint-squeezed
(signal gain, LO gain), which suppresses the beat quadrature variance below
the vacuum value of 1.

All configuration objects are immutable; the per-line noise sum factorizes
over lines, so evaluations parallelize trivially.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import h as PLANCK
from scipy.constants import k as BOLTZMANN

from .errors import DegenerateModelError
from .gaussian import SqueezeGain, joint_quadrature_variance

__all__ = [
    "Environment",
    "SampleResponse",
    "LOPath",
    "DualCombConfig",
    "photons_per_line",
    "line_photon_numbers",
    "line_frequencies",
    "thermal_occupation",
    "mean_ac_spectrum",
    "ac_noise_variance",
    "snr_fundamental",
]

# Below this per-line photon number the linearized (mean field x fluctuation)
# noise model starts to lose validity; configs warn but still evaluate.
LINEARIZATION_PHOTON_FLOOR = 1e3

PerLine = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class Environment:
    """Thermal environment mixed in by lossy channels.

    The occupation of the environment mode at frequency ``f`` follows the
    Bose-Einstein distribution ``1/(exp(h f / kB T) - 1)``; at ``temperature
    = 0`` every mode is vacuum.
    """

    temperature: float = 0.0

    def __post_init__(self) -> None:
        if self.temperature < 0.0:
            raise ValueError(f"temperature must be >= 0 K, got {self.temperature}")

    def occupation(self, frequency):
        """Mean thermal photon number at ``frequency`` (Hz, scalar or array)."""
        freq = np.asarray(frequency, dtype=float)
        if np.any(freq <= 0.0):
            raise ValueError("frequency must be positive")
        if self.temperature == 0.0:
            out = np.zeros_like(freq)
        else:
            x = PLANCK * freq / (BOLTZMANN * self.temperature)
            out = np.where(x > 700.0, 0.0, 1.0 / np.expm1(np.minimum(x, 700.0)))
        if out.ndim == 0:
            return float(out)
        return out

    @classmethod
    def from_occupation(cls, occupation: float, frequency: float) -> "Environment":
        """Environment whose occupation at ``frequency`` equals ``occupation``."""
        if occupation < 0.0:
            raise ValueError(f"occupation must be >= 0, got {occupation}")
        if frequency <= 0.0:
            raise ValueError("frequency must be positive")
        if occupation == 0.0:
            return cls(0.0)
        temperature = PLANCK * frequency / (BOLTZMANN * math.log1p(1.0 / occupation))
        return cls(temperature)


@dataclass(frozen=True, eq=False)
class _LineChannel:
    """Per-line transmissivity and phase, uniform scalar or length-N vector."""

    transmissivity: PerLine = 1.0
    phase: PerLine = 0.0

    def __post_init__(self) -> None:
        trans = np.asarray(self.transmissivity, dtype=float)
        if np.any(trans < 0.0) or np.any(trans > 1.0):
            raise ValueError("transmissivity values must lie in [0, 1]")
        phase = np.asarray(self.phase, dtype=float)
        if not np.all(np.isfinite(phase)):
            raise ValueError("phase values must be finite")

    def per_line(self, n_lines: int):
        """Return ``(transmissivity, phase)``, scalars or arrays of length N."""
        out = []
        for name, value in (("transmissivity", self.transmissivity), ("phase", self.phase)):
            arr = np.asarray(value, dtype=float)
            if arr.ndim == 0:
                out.append(float(arr))
            elif arr.shape == (n_lines,):
                out.append(arr)
            else:
                raise ValueError(f"{name} vector has length {arr.size}, expected {n_lines}")
        return tuple(out)

    def line(self, n_lines: int, m: int):
        """Scalar ``(transmissivity, phase)`` for line ``m`` (1-based)."""
        trans, phase = self.per_line(n_lines)
        t = trans if np.ndim(trans) == 0 else float(trans[m - 1])
        p = phase if np.ndim(phase) == 0 else float(phase[m - 1])
        return t, p


class SampleResponse(_LineChannel):
    """Sample channel per comb line: transmissivity kappa_n, phase alpha_n."""


class LOPath(_LineChannel):
    """LO storage channel per comb line: transmissivity eta_n, phase beta_n."""


@dataclass(frozen=True, eq=False)
class DualCombConfig:
    """Full dual-comb experiment description.

    Exactly one of ``wavelength`` (m) and ``carrier_frequency`` (Hz) must be
    given; the other is derived via ``nu0 = c / lambda``.  ``signal_weights``
    and ``lo_weights`` optionally give a relative per-line amplitude profile
    (internally normalized to preserve the total power); when omitted the comb
    lines are symmetric, which is the default working assumption.
    """

    n_lines: int
    rep_rate: float
    rep_offset: float
    acquisition_time: float
    signal_power: float
    lo_power: float
    wavelength: Optional[float] = None
    carrier_frequency: Optional[float] = None
    signal_gain: SqueezeGain = field(default_factory=SqueezeGain)
    lo_gain: SqueezeGain = field(default_factory=SqueezeGain)
    signal_weights: Optional[tuple] = None
    lo_weights: Optional[tuple] = None

    def __post_init__(self) -> None:
        if self.n_lines < 1:
            raise ValueError(f"n_lines must be >= 1, got {self.n_lines}")
        if self.wavelength is None and self.carrier_frequency is None:
            raise ValueError("one of wavelength or carrier_frequency is required")
        if self.wavelength is None:
            object.__setattr__(self, "wavelength", SPEED_OF_LIGHT / self.carrier_frequency)
        elif self.carrier_frequency is None:
            object.__setattr__(self, "carrier_frequency", SPEED_OF_LIGHT / self.wavelength)
        elif abs(self.carrier_frequency * self.wavelength - SPEED_OF_LIGHT) > 1e-6 * SPEED_OF_LIGHT:
            raise ValueError("wavelength and carrier_frequency are inconsistent")
        if self.wavelength <= 0.0:
            raise ValueError("wavelength must be positive")
        if self.rep_rate <= 0.0 or self.rep_offset <= 0.0:
            raise ValueError("repetition rate and offset must be positive")
        if self.rep_offset / self.rep_rate >= 1e-2:
            raise ValueError("rep_offset must satisfy rep_offset/rep_rate < 1e-2")
        if self.acquisition_time <= 0.0:
            raise ValueError("acquisition_time must be positive")
        if self.rep_rate <= 1.0 / self.acquisition_time:
            raise ValueError("rep_rate must exceed 1/acquisition_time to avoid aliasing")
        if self.n_lines * self.rep_offset >= self.rep_rate / 2.0:
            raise ValueError("n_lines * rep_offset must stay below rep_rate/2 (sideband overlap)")
        if self.signal_power < 0.0 or self.lo_power < 0.0:
            raise ValueError("powers must be >= 0")
        for name in ("signal_weights", "lo_weights"):
            weights = getattr(self, name)
            if weights is None:
                continue
            arr = np.asarray(weights, dtype=float)
            if arr.shape != (self.n_lines,) or np.any(arr <= 0.0):
                raise ValueError(f"{name} must be {self.n_lines} positive values")
            object.__setattr__(self, name, tuple(arr))
        floor = LINEARIZATION_PHOTON_FLOOR
        for power in (self.signal_power, self.lo_power):
            if 0.0 < power and photons_per_line(power, self) < floor:
                warnings.warn(
                    "per-line photon number below 1e3; the linearized noise model "
                    "may be inaccurate",
                    stacklevel=2,
                )
                break

    @property
    def gamma(self) -> float:
        """LO-to-signal power ratio."""
        if self.signal_power == 0.0:
            return math.inf
        return self.lo_power / self.signal_power

    @property
    def photon_energy(self) -> float:
        """Energy per photon at the carrier, h*nu0 (J)."""
        return PLANCK * self.carrier_frequency

    @property
    def uniform_lines(self) -> bool:
        """True when both combs use the symmetric (equal-amplitude) profile."""
        return self.signal_weights is None and self.lo_weights is None


def _check_line_index(cfg: DualCombConfig, m: int) -> None:
    if not 1 <= m <= cfg.n_lines:
        raise ValueError(f"line index m={m} out of range 1..{cfg.n_lines}")


def photons_per_line(power: float, cfg: DualCombConfig) -> float:
    """Photon number per comb line over the acquisition, ``P*T/(N h nu0)``.

    Assumes the symmetric comb profile; use :func:`line_photon_numbers` for
    weighted combs.
    """
    if power < 0.0:
        raise ValueError("power must be >= 0")
    return power * cfg.acquisition_time / (cfg.n_lines * cfg.photon_energy)


def line_photon_numbers(cfg: DualCombConfig):
    """Per-line photon numbers ``(|A_n|^2, |B_n|^2)`` honoring line weights.

    Weight profiles are normalized so the summed photon number reproduces the
    configured total powers.  Returns scalars for symmetric combs.
    """
    out = []
    for power, weights in (
        (cfg.signal_power, cfg.signal_weights),
        (cfg.lo_power, cfg.lo_weights),
    ):
        base = photons_per_line(power, cfg)
        if weights is None:
            out.append(base)
        else:
            w2 = np.asarray(weights) ** 2
            out.append(base * w2 * (cfg.n_lines / w2.sum()))
    return tuple(out)


def line_frequencies(cfg: DualCombConfig) -> np.ndarray:
    """Absolute optical frequency of each comb line, ``nu0 + n*f_r``."""
    return cfg.carrier_frequency + np.arange(1, cfg.n_lines + 1) * cfg.rep_rate


def thermal_occupation(frequency: float, env: Environment):
    """Bose-Einstein mean photon number at ``frequency``; 0 at zero temperature."""
    return env.occupation(frequency)


def mean_ac_spectrum(
    cfg: DualCombConfig, sample: SampleResponse, lo: LOPath, m: int
) -> complex:
    """Mean heterodyne spectrum at intermediate frequency ``m*df_r``.

    ``sqrt(kappa_m eta_m) A_m B_m exp(i(alpha_m - beta_m))``.
    """
    _check_line_index(cfg, m)
    kappa_m, alpha_m = sample.line(cfg.n_lines, m)
    eta_m, beta_m = lo.line(cfg.n_lines, m)
    a2, b2 = line_photon_numbers(cfg)
    a_m = math.sqrt(a2 if np.ndim(a2) == 0 else a2[m - 1])
    b_m = math.sqrt(b2 if np.ndim(b2) == 0 else b2[m - 1])
    return math.sqrt(kappa_m * eta_m) * a_m * b_m * complex(
        math.cos(alpha_m - beta_m), math.sin(alpha_m - beta_m)
    )


def _line_occupations(cfg: DualCombConfig, env: Environment):
    if env.temperature == 0.0:
        return 0.0
    return env.occupation(line_frequencies(cfg))


def ac_noise_variance(
    cfg: DualCombConfig,
    sample: SampleResponse,
    lo: LOPath,
    env: Environment,
    m: int,
) -> float:
    """Readout noise variance at bin ``m*df_r``, summed over all comb lines.

    Per line ``n`` the contribution is
    ``thermal_n + eta_n kappa_n (B_n^2 varX_n + A_n^2 varQ_n)`` with
    ``thermal_n = eta_n B_n^2 (1-kappa_n)(2E_n+1)
    + kappa_n A_n^2 (1-eta_n)(2E_n+1)``.  ``varX`` uses the signal gain and
    ``varQ`` the LO gain, both at mismatch ``theta_n = alpha_n - beta_n``;
    environment occupations ``E_n`` are evaluated at the absolute line
    frequencies.  The variance does not depend on ``m`` for smooth spectra,
    but the index is kept explicit for future non-uniform models.
    """
    _check_line_index(cfg, m)
    kappa, alpha = sample.per_line(cfg.n_lines)
    eta, beta = lo.per_line(cfg.n_lines)
    a2, b2 = line_photon_numbers(cfg)
    theta = np.subtract(alpha, beta)
    var_x = joint_quadrature_variance(cfg.signal_gain, theta)
    var_q = joint_quadrature_variance(cfg.lo_gain, theta)
    occ = _line_occupations(cfg, env)
    chi = 2.0 * np.asarray(occ) + 1.0
    thermal = eta * b2 * (1.0 - np.asarray(kappa)) * chi + np.multiply(kappa, a2) * (
        1.0 - np.asarray(eta)
    ) * chi
    per_line = thermal + np.multiply(eta, kappa) * (b2 * var_x + a2 * var_q)
    if np.ndim(per_line) == 0:
        return cfg.n_lines * float(per_line)
    return float(np.sum(np.broadcast_to(per_line, (cfg.n_lines,))))


def snr_fundamental(
    cfg: DualCombConfig,
    sample: SampleResponse,
    lo: LOPath,
    env: Environment,
    m: int,
) -> float:
    """Amplitude SNR at line ``m`` from the fundamental readout noise alone."""
    variance = ac_noise_variance(cfg, sample, lo, env, m)
    if variance <= 0.0:
        raise DegenerateModelError("readout noise variance is zero; SNR undefined")
    return abs(mean_ac_spectrum(cfg, sample, lo, m)) / math.sqrt(variance)
