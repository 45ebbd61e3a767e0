"""Quantum noise model for entanglement-enhanced dual-comb spectroscopy.

Analytic SNR and noise budgets for dual-comb heterodyne detection with
joint-squeezed comb sidebands, quantum-advantage maps, estimation bounds,
and an independent Monte-Carlo Gaussian-sampling oracle that verifies every
analytic result.  The ``qcomb`` command-line tool drives single-point
evaluations, parameter sweeps and verification runs.
"""

from .dualcomb import (
    DualCombConfig,
    Environment,
    LOPath,
    SampleResponse,
    ac_noise_variance,
    line_photon_numbers,
    mean_ac_spectrum,
    photons_per_line,
    snr_fundamental,
    thermal_occupation,
)
from .errors import DegenerateModelError, ExtrapolationError, TableFormatError
from .gaussian import (
    GaussianState,
    SqueezeGain,
    apply_loss,
    apply_phase,
    is_physical,
    joint_quadrature_variance,
    joint_quadrature_variance_from_state,
    tmsv_state,
    vacuum_state,
)
from .mc import (
    EmpiricalStats,
    McMode,
    McRun,
    interferogram_line_spectrum,
    run_verification_suite,
    sample_readout,
    synthesize_interferogram,
    verify_crb,
    verify_variance,
)
from .noise import (
    DetectorModel,
    NoiseBreakdown,
    classical_coefficients,
    mmse_bounds,
    quad_coefficient,
    quantum_advantage,
    saturation_thresholds,
    sigma_nep,
    sigma_quad,
    sigma_rin,
    snr_full,
    snr_with_terms,
)
from .spectra import (
    AbsorptionTable,
    load_absorption_table,
    load_default_water_table,
    transmissivity,
    water_limited_advantage,
)

__version__ = "0.1.0"
