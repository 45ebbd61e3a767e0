"""Brute-force Gaussian-sampling verification of the analytic noise model.

Every analytic variance in this package ultimately reduces to second moments
of linear combinations of Gaussian sideband modes.  This module re-derives
those moments empirically: it draws the joint quadratures of each squeezed
sideband pair and each thermal environment mode directly from their defining
variances, assembles the heterodyne readout bin by bin (either directly in
the frequency domain or by synthesizing the interferogram time series and
taking a DFT), and compares sample statistics against the closed forms.  The
sampling path deliberately never calls the closed-form beat variance, so the
two routes stay independent.

Randomness comes from the counter-based Philox bit generator
(``numpy.random.Philox``), with independent substreams derived from the run
seed via ``numpy.random.SeedSequence.spawn``; a seed fully determines the
sample stream.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dualcomb import (
    DualCombConfig,
    Environment,
    LOPath,
    SampleResponse,
    ac_noise_variance,
    line_frequencies,
    line_photon_numbers,
    mean_ac_spectrum,
    snr_fundamental,
)
from .errors import DegenerateModelError
from .gaussian import SqueezeGain
from .noise import mmse_bounds

__all__ = [
    "RNG_ALGORITHM",
    "McMode",
    "McRun",
    "EmpiricalStats",
    "VarianceReport",
    "CrbReport",
    "generator",
    "sample_readout",
    "synthesize_interferogram",
    "interferogram_line_spectrum",
    "verify_variance",
    "verify_crb",
    "CheckResult",
    "run_verification_suite",
]

RNG_ALGORITHM = (
    f"numpy.random.Philox (Philox 4x64 counter-based), "
    f"substreams via SeedSequence.spawn, numpy {np.__version__}"
)

# The time-domain path exists to validate the filtering/DFT identity, not to
# produce production SNR numbers; quadratic cost in line count.
TIME_DOMAIN_MAX_LINES = 64

_SQRT2 = math.sqrt(2.0)


class McMode(enum.Enum):
    FREQUENCY_DOMAIN = "frequency_domain"
    TIME_DOMAIN = "time_domain"


@dataclass(frozen=True)
class McRun:
    """A reproducible Monte-Carlo run over one experiment configuration."""

    config: DualCombConfig
    sample: SampleResponse
    lo: LOPath
    environment: Environment
    seed: int
    n_samples: int
    mode: McMode = McMode.FREQUENCY_DOMAIN
    sample_rate: Optional[float] = None  # Hz; default 4*N*rep_offset

    def __post_init__(self) -> None:
        if self.n_samples < 100:
            raise ValueError(f"n_samples must be >= 100, got {self.n_samples}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class EmpiricalStats:
    """Sample mean and central variance of a complex readout ensemble.

    ``sample_variance`` follows the complex-operator convention
    ``<|x - mean|^2>`` (real plus imaginary variances, ddof=1).  The quoted
    ``standard_error = variance * sqrt(2/n)`` is the conservative Gaussian
    approximation used by all pass/fail decisions here.
    """

    sample_mean: complex
    sample_variance: float
    standard_error: float
    n: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "EmpiricalStats":
        n = samples.size
        mean = complex(samples.mean())
        variance = float(np.sum(np.abs(samples - mean) ** 2) / (n - 1))
        return cls(
            sample_mean=mean,
            sample_variance=variance,
            standard_error=variance * math.sqrt(2.0 / n),
            n=n,
        )


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for substream ``stream`` of ``seed``."""
    child = np.random.SeedSequence(seed).spawn(stream + 1)[stream]
    return np.random.Generator(np.random.Philox(child))


def _tmsv_beat(rng: np.random.Generator, n: int, gain: SqueezeGain, theta: float) -> np.ndarray:
    """Samples of ``a1 e^{i theta} + a2* e^{-i theta}`` on a squeezed pair.

    The pair is drawn in its joint quadratures, where the squeezing is
    defined: q+ and p- at variance 1/(2g), q- and p+ at g/2.
    """
    g = gain.g
    raw = rng.standard_normal((4, n))
    lo_sd = math.sqrt(0.5 / g)
    hi_sd = math.sqrt(0.5 * g)
    q_plus, p_minus = lo_sd * raw[0], lo_sd * raw[1]
    p_plus, q_minus = hi_sd * raw[2], hi_sd * raw[3]
    q1 = (q_plus + q_minus) / _SQRT2
    q2 = (q_plus - q_minus) / _SQRT2
    p1 = (p_plus + p_minus) / _SQRT2
    p2 = (p_plus - p_minus) / _SQRT2
    a1 = (q1 + 1j * p1) / _SQRT2
    a2 = (q2 + 1j * p2) / _SQRT2
    phase = complex(math.cos(theta), math.sin(theta))
    return a1 * phase + np.conj(a2) * np.conj(phase)


def _thermal_beat(rng: np.random.Generator, n: int, occupation: float) -> np.ndarray:
    """Samples of ``e1 + e2*`` on two independent thermal modes."""
    sd = math.sqrt(occupation + 0.5)
    raw = sd * rng.standard_normal((4, n))
    e1 = (raw[0] + 1j * raw[1]) / _SQRT2
    e2 = (raw[2] + 1j * raw[3]) / _SQRT2
    return e1 + np.conj(e2)


def _scalar(values, idx: int) -> float:
    return float(values) if np.ndim(values) == 0 else float(values[idx])


def _bin_noise(rng: np.random.Generator, run: McRun, n: int) -> np.ndarray:
    """Summed readout fluctuation for one intermediate-frequency bin."""
    cfg = run.config
    kappa, alpha = run.sample.per_line(cfg.n_lines)
    eta, beta = run.lo.per_line(cfg.n_lines)
    a2, b2 = line_photon_numbers(cfg)
    if run.environment.temperature == 0.0:
        occ = np.zeros(cfg.n_lines)
    else:
        occ = np.atleast_1d(run.environment.occupation(line_frequencies(cfg)))
    total = np.zeros(n, dtype=complex)
    for i in range(cfg.n_lines):
        k, e = _scalar(kappa, i), _scalar(eta, i)
        theta = _scalar(alpha, i) - _scalar(beta, i)
        a_amp, b_amp = math.sqrt(_scalar(a2, i)), math.sqrt(_scalar(b2, i))
        total += math.sqrt(e * k) * b_amp * _tmsv_beat(rng, n, cfg.signal_gain, theta)
        total += math.sqrt(e * k) * a_amp * _tmsv_beat(rng, n, cfg.lo_gain, -theta)
        if k < 1.0:
            total += math.sqrt(e * (1.0 - k)) * b_amp * _thermal_beat(rng, n, occ[i])
        if e < 1.0:
            total += math.sqrt((1.0 - e) * k) * a_amp * _thermal_beat(rng, n, occ[i])
    return total


def _warn_if_nonlinearized(run: McRun) -> None:
    a2, b2 = line_photon_numbers(run.config)
    if min(np.min(a2), np.min(b2)) < 1e3:
        warnings.warn(
            "per-line photon number below 1e3; linearized sampling model "
            "may be inaccurate",
            stacklevel=3,
        )


def sample_readout(run: McRun, m: int) -> np.ndarray:
    """Complex samples of the readout at bin ``m*df_r``.

    Frequency-domain mode draws the bin directly; time-domain mode
    synthesizes the full noisy interferogram and extracts the bin by DFT.
    """
    _warn_if_nonlinearized(run)
    if run.mode is McMode.TIME_DOMAIN:
        return _sample_readout_time(run, m)
    rng = generator(run.seed, stream=0)
    mean = mean_ac_spectrum(run.config, run.sample, run.lo, m)
    return mean + _bin_noise(rng, run, run.n_samples)


def _time_grid(run: McRun):
    cfg = run.config
    rate = run.sample_rate
    if rate is None:
        rate = 4.0 * cfg.n_lines * cfg.rep_offset
    nyquist = 2.0 * cfg.n_lines * cfg.rep_offset
    if rate < nyquist:
        raise ValueError(f"sample rate {rate} Hz below the AC-band Nyquist rate {nyquist} Hz")
    length = int(round(rate / cfg.rep_offset))
    # At exactly 2N samples per period the bin-N conjugate image aliases
    # onto itself, so strictly more than 2N points are required.
    if length <= 2 * cfg.n_lines:
        raise ValueError("sample rate must resolve more than 2*n_lines points per period")
    return length


def _check_time_domain_size(cfg: DualCombConfig) -> None:
    if cfg.n_lines > TIME_DOMAIN_MAX_LINES:
        raise ValueError(
            f"time-domain synthesis is limited to {TIME_DOMAIN_MAX_LINES} lines, "
            f"got {cfg.n_lines}"
        )


def _sample_readout_time(run: McRun, m: int) -> np.ndarray:
    cfg = run.config
    _check_time_domain_size(cfg)
    length = _time_grid(run)
    rng = generator(run.seed, stream=0)
    bins = np.empty((run.n_samples, cfg.n_lines), dtype=complex)
    for line in range(1, cfg.n_lines + 1):
        mean = mean_ac_spectrum(cfg, run.sample, run.lo, line)
        bins[:, line - 1] = mean + _bin_noise(rng, run, run.n_samples)
    t_axis = np.arange(length)
    tones = np.exp(
        2j * math.pi * np.outer(np.arange(1, cfg.n_lines + 1), t_axis) / length
    )
    series = (2.0 / cfg.acquisition_time) * (bins @ tones).real
    probe = np.exp(-2j * math.pi * m * t_axis / length)
    return (cfg.acquisition_time / length) * (series @ probe)


def synthesize_interferogram(run: McRun, include_noise: bool = False):
    """One period of the interferogram time series, ``(times, values)``.

    The deterministic part is the sum of per-line tones at multiples of the
    repetition-rate offset with the mean-spectrum amplitudes; sampled over
    one full period ``1/df_r`` at the run's sample rate.  With
    ``include_noise`` a single noise realization is added per bin.
    """
    cfg = run.config
    _check_time_domain_size(cfg)
    length = _time_grid(run)
    bins = np.array(
        [mean_ac_spectrum(cfg, run.sample, run.lo, line) for line in range(1, cfg.n_lines + 1)],
        dtype=complex,
    )
    if include_noise:
        rng = generator(run.seed, stream=1)
        bins = bins + np.array([_bin_noise(rng, run, 1)[0] for _ in range(cfg.n_lines)])
    t_axis = np.arange(length)
    tones = np.exp(2j * math.pi * np.outer(np.arange(1, cfg.n_lines + 1), t_axis) / length)
    values = (2.0 / cfg.acquisition_time) * (bins @ tones).real
    times = t_axis / (length * cfg.rep_offset)
    return times, values


def interferogram_line_spectrum(values: np.ndarray, cfg: DualCombConfig) -> np.ndarray:
    """Per-line complex spectrum recovered from a time series by DFT.

    Inverts :func:`synthesize_interferogram`: bin ``m`` of
    ``fft(values) * T / L`` reproduces the mean spectrum of line ``m``.
    """
    length = values.size
    spectrum = np.fft.fft(values) * (cfg.acquisition_time / length)
    return spectrum[1 : cfg.n_lines + 1]


@dataclass(frozen=True)
class VarianceReport:
    empirical: EmpiricalStats
    analytic: float
    z_score: float
    passed: bool


def verify_variance(run: McRun, m: int, tolerance_sigmas: float = 3.0) -> VarianceReport:
    """Compare the empirical readout variance at bin ``m`` to the closed form."""
    if run.n_samples < 10_000:
        raise ValueError("variance verification needs n_samples >= 1e4")
    samples = sample_readout(run, m)
    stats = EmpiricalStats.from_samples(samples)
    analytic = ac_noise_variance(run.config, run.sample, run.lo, run.environment, m)
    z = (stats.sample_variance - analytic) / stats.standard_error
    return VarianceReport(
        empirical=stats,
        analytic=analytic,
        z_score=z,
        passed=bool(abs(z) <= tolerance_sigmas),
    )


@dataclass(frozen=True)
class CrbReport:
    mse_sqrt_kappa: float
    mse_theta: float
    crb_sqrt_kappa: float
    crb_theta: float
    ratio_sqrt_kappa: float
    ratio_theta: float
    snr: float
    n: int


def verify_crb(run: McRun, m: int, true_kappa: float, true_theta: float) -> CrbReport:
    """Maximum-likelihood estimator errors against the Cramer-Rao bounds.

    The sqrt-transmissivity estimator reads the real quadrature only,
    ``sqrt(kappa) = Re(readout)/(sqrt(eta) A B)``, so it assumes matched
    phase; the phase estimator is ``atan2(Im, Re)``.  Efficiency is only
    asymptotic: below SNR of about 3 the linearization breaks down and a
    warning is issued.
    """
    cfg = run.config
    _, alpha_m = run.sample.line(cfg.n_lines, m)
    eta_m, beta_m = run.lo.line(cfg.n_lines, m)
    if abs((alpha_m - beta_m) - true_theta) > 1e-9:
        raise ValueError("config phase mismatch does not match true_theta")
    if eta_m == 0.0:
        raise DegenerateModelError("eta_m is zero; estimator undefined")
    snr = snr_fundamental(cfg, run.sample, run.lo, run.environment, m)
    if snr < 3.0:
        warnings.warn("SNR below 3: ML estimators are biased here", stacklevel=2)
    samples = sample_readout(run, m)
    a2, b2 = line_photon_numbers(cfg)
    amp = math.sqrt(_scalar(a2, m - 1) * _scalar(b2, m - 1))
    rotated = samples * complex(math.cos(-true_theta), math.sin(-true_theta))
    sqrt_kappa_hat = rotated.real / (math.sqrt(eta_m) * amp)
    theta_hat = np.arctan2(samples.imag, samples.real)
    mse_kappa = float(np.mean((sqrt_kappa_hat - math.sqrt(true_kappa)) ** 2))
    mse_theta = float(np.mean((theta_hat - true_theta) ** 2))
    crb_kappa, crb_theta = mmse_bounds(snr, true_kappa)
    return CrbReport(
        mse_sqrt_kappa=mse_kappa,
        mse_theta=mse_theta,
        crb_sqrt_kappa=crb_kappa,
        crb_theta=crb_theta,
        ratio_sqrt_kappa=mse_kappa / crb_kappa,
        ratio_theta=mse_theta / crb_theta,
        snr=snr,
        n=samples.size,
    )


@dataclass(frozen=True)
class CheckResult:
    """One verification row: pass iff ``|z_score| <= tolerance``.

    ``z_score`` is the check's test statistic: standard errors for
    statistical checks, relative error for the deterministic DFT identity,
    fractional deviation of the MSE/CRB ratio for estimator checks.
    """

    check: str
    analytic: float
    empirical: float
    z_score: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(abs(self.z_score) <= self.tolerance)


def run_verification_suite(
    run: McRun,
    m: int = 1,
    corrupt_analytic: float = 1.0,
) -> list[CheckResult]:
    """The default check battery for one configuration.

    Rows: frequency-domain variance, time-domain variance (line count
    permitting, sample count capped at 2e4), CRB efficiency for the two
    estimators when the phase is matched, and the noiseless DFT identity.
    ``corrupt_analytic`` is a testing hook that scales every analytic
    reference value so the failure path can be exercised deliberately.
    """
    cfg = run.config
    results = []

    freq_run = McRun(
        config=cfg, sample=run.sample, lo=run.lo, environment=run.environment,
        seed=run.seed, n_samples=run.n_samples, mode=McMode.FREQUENCY_DOMAIN,
    )
    rep = verify_variance(freq_run, m)
    analytic = rep.analytic * corrupt_analytic
    z = (rep.empirical.sample_variance - analytic) / rep.empirical.standard_error
    results.append(
        CheckResult("variance_frequency_domain", analytic, rep.empirical.sample_variance, z, 3.0)
    )

    if cfg.n_lines <= TIME_DOMAIN_MAX_LINES:
        # Shifted seed so the time-domain row draws independently of the
        # frequency-domain row instead of replaying the same stream.
        time_run = McRun(
            config=cfg, sample=run.sample, lo=run.lo, environment=run.environment,
            seed=(run.seed + 1) % 2**64, n_samples=min(run.n_samples, 20_000),
            mode=McMode.TIME_DOMAIN, sample_rate=run.sample_rate,
        )
        rep = verify_variance(time_run, m)
        analytic = rep.analytic * corrupt_analytic
        z = (rep.empirical.sample_variance - analytic) / rep.empirical.standard_error
        results.append(
            CheckResult("variance_time_domain", analytic, rep.empirical.sample_variance, z, 3.0)
        )

    kappa_m, alpha_m = run.sample.line(cfg.n_lines, m)
    eta_m, beta_m = run.lo.line(cfg.n_lines, m)
    if abs(alpha_m - beta_m) < 1e-12 and kappa_m > 0.0 and eta_m > 0.0:
        crb = verify_crb(freq_run, m, true_kappa=kappa_m, true_theta=0.0)
        for name, mse, bound in (
            ("crb_sqrt_kappa", crb.mse_sqrt_kappa, crb.crb_sqrt_kappa),
            ("crb_theta", crb.mse_theta, crb.crb_theta),
        ):
            bound = bound * corrupt_analytic
            results.append(CheckResult(name, bound, mse, mse / bound - 1.0, 0.15))

    if cfg.n_lines <= TIME_DOMAIN_MAX_LINES:
        _, series = synthesize_interferogram(run, include_noise=False)
        recovered = interferogram_line_spectrum(series, cfg)
        expected = np.array(
            [mean_ac_spectrum(cfg, run.sample, run.lo, line) for line in range(1, cfg.n_lines + 1)]
        )
        expected = expected * corrupt_analytic
        scale = np.max(np.abs(expected))
        if scale > 0.0:
            rel = float(np.max(np.abs(recovered - expected)) / scale)
            results.append(
                CheckResult("dft_identity", float(scale), float(np.max(np.abs(recovered))), rel, 1e-6)
            )

    return results
