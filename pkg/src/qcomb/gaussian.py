"""Minimal Gaussian-state algebra for heterodyne noise modeling.

Quadrature convention used throughout the package: dimensionless quadratures
``q = (a + a^dag)/sqrt(2)``, ``p = (a - a^dag)/(i sqrt(2))`` ordered
``(q1, p1, q2, p2, ...)``, with vacuum variance 1/2 per real quadrature.
A complex beat operator ``a1 e^{i theta} + a2^dag e^{-i theta}`` built from a
mode pair therefore has vacuum variance 1 (it is the sum of the variances of
its real and imaginary parts), twice the 1/2 standard quantum limit of a
single real quadrature.

States are immutable values and every operation is a pure function returning
a new state, so evaluations are safe to run in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SqueezeGain",
    "GaussianState",
    "symplectic_form",
    "vacuum_state",
    "tmsv_state",
    "apply_loss",
    "apply_phase",
    "joint_quadrature_variance",
    "joint_quadrature_variance_from_state",
    "is_physical",
]

VACUUM_QUADRATURE_VARIANCE = 0.5

_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class SqueezeGain:
    """Linear joint-squeezing gain ``g = e^{2r} >= 1`` with a decibel view.

    ``g = 1`` is the unsqueezed (coherent/vacuum noise) case.  The decibel
    convention is ``10*log10(g)``, so 10 dB means ``g = 10``.
    """

    g: float = 1.0

    def __post_init__(self) -> None:
        if not (self.g >= 1.0):
            raise ValueError(f"squeeze gain must be >= 1, got {self.g!r}")

    @classmethod
    def from_db(cls, db: float) -> "SqueezeGain":
        return cls(10.0 ** (db / 10.0))

    @property
    def db(self) -> float:
        return 10.0 * math.log10(self.g)

    @property
    def r(self) -> float:
        """Squeeze parameter, ``g = e^{2r}``."""
        return 0.5 * math.log(self.g)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Gaussian state of ``M`` modes: mean vector and quadrature covariance.

    Attributes
    ----------
    mean:
        Real vector of length ``2*M`` ordered ``(q1, p1, q2, p2, ...)``.
    cov:
        Real symmetric ``2M x 2M`` covariance matrix in the same ordering.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        mean = np.array(self.mean, dtype=float)
        cov = np.array(self.cov, dtype=float)
        if mean.ndim != 1 or mean.size % 2 != 0 or mean.size == 0:
            raise ValueError(f"mean must have even positive length, got shape {mean.shape}")
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"covariance shape {cov.shape} does not match mean length {mean.size}")
        if np.max(np.abs(cov - cov.T)) > _SYMMETRY_TOL:
            raise ValueError("covariance is not symmetric to within 1e-12")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def mode_count(self) -> int:
        return self.mean.size // 2


def symplectic_form(mode_count: int) -> np.ndarray:
    """Block-diagonal symplectic form with ``[[0, 1], [-1, 0]]`` per mode."""
    omega = np.zeros((2 * mode_count, 2 * mode_count))
    for k in range(mode_count):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def vacuum_state(mode_count: int) -> GaussianState:
    """Vacuum on ``mode_count`` modes: zero mean, covariance ``I/2``."""
    if mode_count < 1:
        raise ValueError(f"mode_count must be >= 1, got {mode_count}")
    n = 2 * int(mode_count)
    return GaussianState(np.zeros(n), VACUUM_QUADRATURE_VARIANCE * np.eye(n))


def tmsv_state(gain: SqueezeGain) -> GaussianState:
    """Two-mode squeezed vacuum with joint-squeezing gain ``g``.

    The joint quadratures ``q+ = (q1+q2)/sqrt(2)`` and ``p- = (p1-p2)/sqrt(2)``
    are squeezed to variance ``1/(2g)`` while ``q-`` and ``p+`` are amplified
    to ``g/2``.  ``g = 1`` returns two-mode vacuum.
    """
    c = (gain.g + 1.0 / gain.g) / 4.0  # cosh(2r)/2
    s = (gain.g - 1.0 / gain.g) / 4.0  # sinh(2r)/2
    cov = np.array(
        [
            [c, 0.0, -s, 0.0],
            [0.0, c, 0.0, s],
            [-s, 0.0, c, 0.0],
            [0.0, s, 0.0, c],
        ]
    )
    return GaussianState(np.zeros(4), cov)


def _check_mode(state: GaussianState, mode: int) -> None:
    if not 0 <= mode < state.mode_count:
        raise IndexError(f"mode {mode} out of range for {state.mode_count}-mode state")


def apply_loss(
    state: GaussianState,
    mode: int,
    transmissivity: float,
    thermal_occupation: float = 0.0,
) -> GaussianState:
    """Thermal-loss channel on one mode.

    The mode's mean is scaled by ``sqrt(transmissivity)``; its covariance
    block becomes ``kappa*Sigma + (1-kappa)*(E + 1/2)*I`` and cross blocks
    with other modes are scaled by ``sqrt(kappa)``.
    """
    _check_mode(state, mode)
    kappa = float(transmissivity)
    if not 0.0 <= kappa <= 1.0:
        raise ValueError(f"transmissivity must be in [0, 1], got {kappa}")
    if thermal_occupation < 0.0:
        raise ValueError(f"thermal occupation must be >= 0, got {thermal_occupation}")
    scale = np.ones(2 * state.mode_count)
    scale[2 * mode : 2 * mode + 2] = math.sqrt(kappa)
    cov = scale[:, None] * state.cov * scale[None, :]
    idx = slice(2 * mode, 2 * mode + 2)
    cov[idx, idx] += (1.0 - kappa) * (thermal_occupation + VACUUM_QUADRATURE_VARIANCE) * np.eye(2)
    return GaussianState(scale * state.mean, cov)


def apply_phase(state: GaussianState, mode: int, phase: float) -> GaussianState:
    """Phase rotation ``a -> a e^{i phase}`` on one mode."""
    _check_mode(state, mode)
    c, s = math.cos(phase), math.sin(phase)
    rot = np.eye(2 * state.mode_count)
    idx = slice(2 * mode, 2 * mode + 2)
    rot[idx, idx] = np.array([[c, -s], [s, c]])
    return GaussianState(rot @ state.mean, rot @ state.cov @ rot.T)


def joint_quadrature_variance(gain: SqueezeGain, mismatch):
    """Variance of the complex beat operator for a TMSV pair, closed form.

    For the beat operator ``X = a1 e^{i theta} + a2^dag e^{-i theta}`` on a
    two-mode squeezed vacuum pair with gain ``g`` and phase mismatch
    ``theta``, ``var X = <X^dag X> = cos^2(theta)/g + g sin^2(theta)``, which
    equals ``[-(g^2-1) cos(2 theta) + (g^2+1)] / (2g)``.  The value runs from
    ``1/g`` at matched phase to ``g`` at quadrature, and is identically 1 for
    ``g = 1``.  The trig-squared form is used because it is free of the
    large-``g`` cancellation of the ``cos(2 theta)`` form.

    ``mismatch`` may be a scalar or an array of angles in radians.
    """
    cos2 = np.cos(mismatch) ** 2
    result = cos2 / gain.g + gain.g * (1.0 - cos2)
    if np.ndim(result) == 0:
        return float(result)
    return result


def joint_quadrature_variance_from_state(state: GaussianState, mismatch: float) -> float:
    """Variance of the complex beat operator evaluated from a covariance.

    Decomposes ``X = a1 e^{i theta} + a2^dag e^{-i theta}`` into real and
    imaginary parts over the joint quadratures,
    ``Re X = cos(theta) q+ - sin(theta) p+`` and
    ``Im X = cos(theta) p- + sin(theta) q-``, whose commutator vanishes, so
    ``<X^dag X> = var(Re X) + var(Im X)`` is a pair of quadratic forms on the
    covariance matrix.  Central variance: the mean does not contribute.
    """
    if state.mode_count != 2:
        raise ValueError(f"expected a 2-mode state, got {state.mode_count} modes")
    c, s = math.cos(mismatch), math.sin(mismatch)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    u = inv_sqrt2 * np.array([c, -s, c, -s])   # cos*q+ - sin*p+
    v = inv_sqrt2 * np.array([s, c, -s, -c])   # cos*p- + sin*q-
    return float(u @ state.cov @ u + v @ state.cov @ v)


def is_physical(state: GaussianState, tol: float = 1e-9) -> bool:
    """Check the uncertainty relation ``cov + (i/2) Omega >= 0``.

    This is an explicit validation step rather than something enforced on
    every mutation; channels constructed by this module preserve it.
    """
    omega = symplectic_form(state.mode_count)
    eigs = np.linalg.eigvalsh(state.cov + 0.5j * omega)
    return bool(eigs.min() >= -tol)
