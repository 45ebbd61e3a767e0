"""Practical SNR model: NEP, quadrature and RIN noise terms and bounds.

The inverse squared amplitude SNR at intermediate frequency ``m*df_r``
decomposes into three normalized noise terms,

    SNR^-2 = (N^2/T) * (a_nep / P_S^2 + a_quad / P_S + a_rin),

an inverse-square law from detector noise (NEP), an inverse law from the
fundamental quadrature noise, and a power-independent term from laser
relative intensity noise (RIN).  Only the quadrature term responds to
squeezing, so the quantum advantage saturates once one of the other terms
dominates.

dB conventions (stated everywhere they appear): squeezing gain in dB is
``10*log10(g)``; quantum advantage is quoted in amplitude-SNR dB,
``10*log10(SNR_q / SNR_cl)``, i.e. ``5*log10`` of the noise-variance ratio.
Spectral densities are single-sided with bandwidth ``df = 1/(2T)``; balanced
detection is assumed throughout (the unbalanced RIN coefficient is exposed
for comparison only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from scipy.constants import h as PLANCK

from .dualcomb import (
    DualCombConfig,
    Environment,
    LOPath,
    SampleResponse,
    ac_noise_variance,
    photons_per_line,
    snr_fundamental,
)
from .errors import DegenerateModelError
from .gaussian import SqueezeGain

__all__ = [
    "DetectorModel",
    "NoiseBreakdown",
    "SaturationThresholds",
    "ClassicalCoefficients",
    "sigma_nep",
    "sigma_quad",
    "sigma_rin",
    "quad_coefficient",
    "snr_full",
    "snr_with_terms",
    "quantum_advantage",
    "saturation_thresholds",
    "mmse_bounds",
    "classical_coefficients",
]


@dataclass(frozen=True)
class DetectorModel:
    """Detector and laser noise figures.

    ``nep`` in W/Hz^(1/2); ``rin_linear`` in 1/Hz.  RIN is usually quoted in
    dBc/Hz; use :meth:`with_rin_dbc` / :meth:`rin_from_dbc`, which round-trip
    with :attr:`rin_dbc` to machine precision.
    """

    nep: float = 0.0
    rin_linear: float = 0.0

    def __post_init__(self) -> None:
        if self.nep < 0.0 or self.rin_linear < 0.0:
            raise ValueError("nep and rin_linear must be >= 0")

    @staticmethod
    def rin_from_dbc(rin_dbc: float) -> float:
        return 10.0 ** (rin_dbc / 10.0)

    @classmethod
    def with_rin_dbc(cls, nep: float, rin_dbc: float) -> "DetectorModel":
        return cls(nep=nep, rin_linear=cls.rin_from_dbc(rin_dbc))

    @property
    def rin_dbc(self) -> float:
        if self.rin_linear == 0.0:
            return -math.inf
        return 10.0 * math.log10(self.rin_linear)


@dataclass(frozen=True)
class NoiseBreakdown:
    """The three normalized noise variances with the resulting SNR.

    ``a_nep``, ``a_quad``, ``a_rin`` are the power-law coefficients such that
    ``sigma2_nep = (N^2/T) a_nep / P_S^2`` and so on.
    """

    sigma2_nep: float
    sigma2_quad: float
    sigma2_rin: float
    snr: float
    a_nep: float
    a_quad: float
    a_rin: float

    @property
    def total_sigma2(self) -> float:
        return self.sigma2_nep + self.sigma2_quad + self.sigma2_rin

    @property
    def snr_db(self) -> float:
        """Amplitude SNR in dB as ``10*log10(snr)``, the same convention as
        the quantum advantage (so dB differences are advantages)."""
        return 10.0 * math.log10(self.snr)

    @property
    def dominant(self) -> str:
        """Label of the largest noise term: 'nep', 'quad' or 'rin'."""
        terms = {
            "nep": self.sigma2_nep,
            "quad": self.sigma2_quad,
            "rin": self.sigma2_rin,
        }
        return max(terms, key=terms.get)


class SaturationThresholds(NamedTuple):
    nep_power: float
    rin_power: float


class ClassicalCoefficients(NamedTuple):
    c_gamma: float
    c_gamma_sq: float
    c_gamma_sq_unbalanced: float


def _normalization(cfg: DualCombConfig) -> float:
    return cfg.n_lines**2 / cfg.acquisition_time


def _line_channel(cfg, sample, lo, m):
    kappa_m, _ = sample.line(cfg.n_lines, m)
    eta_m, _ = lo.line(cfg.n_lines, m)
    return kappa_m, eta_m


def sigma_nep(
    cfg: DualCombConfig,
    sample: SampleResponse,
    lo: LOPath,
    detector: DetectorModel,
    m: int,
) -> float:
    """Normalized NEP-type noise, ``(N^2/T) NEP^2 / (eta_m kappa_m gamma P_S^2)``."""
    kappa_m, eta_m = _line_channel(cfg, sample, lo, m)
    if kappa_m == 0.0 or eta_m == 0.0:
        raise DegenerateModelError("mean signal vanishes (kappa_m or eta_m is zero)")
    if cfg.signal_power <= 0.0 or cfg.lo_power <= 0.0:
        raise ValueError("sigma_nep requires positive signal and LO power")
    return (
        _normalization(cfg)
        * detector.nep**2
        / (eta_m * kappa_m * cfg.gamma * cfg.signal_power**2)
    )


def quad_coefficient(
    cfg: DualCombConfig,
    sample: SampleResponse,
    lo: LOPath,
    env: Environment,
    m: int,
) -> float:
    """Quadrature noise coefficient ``c_gamma = var / (4 eta_m kappa_m B^2 N)``.

    Computed from the full per-line noise sum, so loss, thermal occupation
    and per-line phase mismatch all flow through.  For a classical source
    with unit transmissivities and zero occupation it reduces to
    ``(1 + 1/gamma)/4``.  Refuses weighted (non-symmetric) combs, for which
    only the general noise-sum path is meaningful.
    """
    if not cfg.uniform_lines:
        raise ValueError(
            "quad_coefficient assumes symmetric comb lines; "
            "use ac_noise_variance for weighted combs"
        )
    kappa_m, eta_m = _line_channel(cfg, sample, lo, m)
    if kappa_m == 0.0 or eta_m == 0.0:
        raise DegenerateModelError("mean signal vanishes (kappa_m or eta_m is zero)")
    b2 = photons_per_line(cfg.lo_power, cfg)
    if b2 == 0.0:
        raise ValueError("quad_coefficient requires positive LO power")
    variance = ac_noise_variance(cfg, sample, lo, env, m)
    return variance / (4.0 * eta_m * kappa_m * b2 * cfg.n_lines)


def sigma_quad(
    cfg: DualCombConfig,
    sample: SampleResponse,
    lo: LOPath,
    env: Environment,
    m: int,
) -> float:
    """Normalized quadrature noise, ``(N^2/T) c_gamma 4 h nu0 / P_S``."""
    if cfg.signal_power <= 0.0:
        raise ValueError("sigma_quad requires positive signal power")
    c_gamma = quad_coefficient(cfg, sample, lo, env, m)
    return _normalization(cfg) * c_gamma * 4.0 * cfg.photon_energy / cfg.signal_power


def sigma_rin(cfg: DualCombConfig, detector: DetectorModel) -> float:
    """Normalized RIN-type noise, ``(N^2/T) RIN / 2``.

    Independent of signal power, LO power and their ratio: in the balanced
    quantum model the RIN contribution normalized to the mean spectrum is a
    constant floor.
    """
    return _normalization(cfg) * 2.0 * 0.25 * detector.rin_linear


def snr_full(
    cfg: DualCombConfig,
    sample: SampleResponse,
    lo: LOPath,
    env: Environment,
    detector: DetectorModel,
    m: int,
) -> NoiseBreakdown:
    """Full practical SNR with its noise breakdown at line ``m``."""
    kappa_m, eta_m = _line_channel(cfg, sample, lo, m)
    s_nep = (
        sigma_nep(cfg, sample, lo, detector, m) if detector.nep > 0.0 else 0.0
    )
    s_quad = sigma_quad(cfg, sample, lo, env, m)
    s_rin = sigma_rin(cfg, detector)
    total = s_nep + s_quad + s_rin
    if total <= 0.0:
        raise DegenerateModelError("all noise terms vanish; SNR undefined")
    a_nep = detector.nep**2 / (eta_m * kappa_m * cfg.gamma)
    a_quad = 4.0 * cfg.photon_energy * quad_coefficient(cfg, sample, lo, env, m)
    a_rin = detector.rin_linear / 2.0
    return NoiseBreakdown(
        sigma2_nep=s_nep,
        sigma2_quad=s_quad,
        sigma2_rin=s_rin,
        snr=total**-0.5,
        a_nep=a_nep,
        a_quad=a_quad,
        a_rin=a_rin,
    )


def snr_with_terms(
    cfg: DualCombConfig,
    sample: SampleResponse,
    lo: LOPath,
    env: Environment,
    detector: DetectorModel,
    m: int,
    nep: bool = True,
    quad: bool = True,
    rin: bool = True,
) -> float:
    """SNR keeping only a subset of the noise terms (for limit curves).

    ``nep=True, quad=False, rin=False`` gives the NEP-dictated limit, the
    saturation ceiling of the quantum advantage at low power; likewise for
    RIN at high power.
    """
    total = 0.0
    if nep:
        total += sigma_nep(cfg, sample, lo, detector, m)
    if quad:
        total += sigma_quad(cfg, sample, lo, env, m)
    if rin:
        total += sigma_rin(cfg, detector)
    if total <= 0.0:
        raise DegenerateModelError("selected noise terms all vanish; SNR undefined")
    return total**-0.5


def quantum_advantage(
    cfg_quantum: DualCombConfig,
    cfg_classical: DualCombConfig,
    sample: SampleResponse,
    lo: LOPath,
    env: Environment,
    detector: DetectorModel,
    m: int,
) -> float:
    """Amplitude-SNR advantage in dB, ``10*log10(SNR_q / SNR_cl)``.

    Note the convention: this is ``5*log10`` of the noise-variance ratio, so
    a 10 dB squeezing gain yields at most 5 dB of advantage.
    """
    s_q = snr_full(cfg_quantum, sample, lo, env, detector, m).snr
    s_c = snr_full(cfg_classical, sample, lo, env, detector, m).snr
    if s_c <= 0.0:
        raise DegenerateModelError("classical SNR is zero; advantage undefined")
    return 10.0 * math.log10(s_q / s_c)


def saturation_thresholds(
    gain: SqueezeGain,
    gamma: float,
    kappa: float,
    detector: DetectorModel,
    carrier_frequency: float,
) -> SaturationThresholds:
    """Signal powers where NEP / RIN noise overtakes the quadrature noise.

    Both combs joint-squeezed at ``gain``, matched phase, ideal LO path and
    zero thermal occupation.  The thresholds solve the exact crossings of the
    normalized noise terms:

        sigma2_nep(P)  = sigma2_quad(P)  at  P = g NEP^2 / (h nu0 D),
        sigma2_rin     = sigma2_quad(P)  at  P = 2 h nu0 D / (g gamma kappa RIN),

    with ``D = gamma (g (1 - kappa) + kappa) + kappa``.  ``rin = 0`` is
    reported as an infinite RIN threshold.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if not 0.0 < kappa <= 1.0:
        raise ValueError("kappa must lie in (0, 1]")
    if carrier_frequency <= 0.0:
        raise ValueError("carrier_frequency must be positive")
    g = gain.g
    h_nu = PLANCK * carrier_frequency
    den = gamma * (g * (1.0 - kappa) + kappa) + kappa
    nep_power = g * detector.nep**2 / (h_nu * den)
    if detector.rin_linear == 0.0:
        rin_power = math.inf
    else:
        rin_power = 2.0 * h_nu * den / (g * gamma * kappa * detector.rin_linear)
    return SaturationThresholds(nep_power=nep_power, rin_power=rin_power)


def mmse_bounds(snr: float, kappa: float):
    """Cramer-Rao bounds on sqrt-transmissivity and phase estimation.

    ``MMSE(sqrt(kappa)) = kappa / (2 SNR^2)`` and
    ``MMSE(theta) = 1 / (2 SNR^2)``, valid at matched phase in the
    high-SNR Gaussian regime.
    """
    if snr <= 0.0:
        raise ValueError("snr must be positive")
    if not 0.0 < kappa <= 1.0:
        raise ValueError("kappa must lie in (0, 1]")
    mmse_phase = 1.0 / (2.0 * snr**2)
    return kappa * mmse_phase, mmse_phase


def classical_coefficients(gamma: float) -> ClassicalCoefficients:
    """Closed-form classical noise coefficients for lossless vacuum input.

    ``c_gamma = (1 + 1/gamma)/4`` (quadrature term) and ``c_gamma_sq = 1/4``
    (balanced RIN term); the unbalanced-detection comparison value
    ``(1 + gamma^2)/(2 gamma)`` is included for reference.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    return ClassicalCoefficients(
        c_gamma=(1.0 + 1.0 / gamma) / 4.0,
        c_gamma_sq=0.25,
        c_gamma_sq_unbalanced=(1.0 + gamma**2) / (2.0 * gamma),
    )
