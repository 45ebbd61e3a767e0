import pytest
from scipy.constants import c, h

from qcomb import (
    DetectorModel,
    DualCombConfig,
    Environment,
    LOPath,
    SampleResponse,
    SqueezeGain,
)


def make_config(
    n_lines=8,
    signal_power=1e-6,
    gamma=5.0,
    wavelength=1e-6,
    signal_gain=1.0,
    lo_gain=1.0,
    rep_offset=1e3,
    acquisition_time=1.0,
    **kwargs,
):
    """Small, photon-rich dual-comb config for unit tests."""
    return DualCombConfig(
        n_lines=n_lines,
        rep_rate=1e8,
        rep_offset=rep_offset,
        acquisition_time=acquisition_time,
        signal_power=signal_power,
        lo_power=gamma * signal_power,
        wavelength=wavelength,
        signal_gain=SqueezeGain(signal_gain),
        lo_gain=SqueezeGain(lo_gain),
        **kwargs,
    )


def power_for_line_photons(photons, n_lines, wavelength=1e-6, acquisition_time=1.0):
    """Power giving exactly `photons` photons per line."""
    return photons * n_lines * h * (c / wavelength) / acquisition_time


@pytest.fixture
def fig1c_inputs():
    """The reference practical-noise scenario: N=1e5, T=1 s, 1 um, gamma=5."""
    cfg = DualCombConfig(
        n_lines=100_000,
        rep_rate=1e8,
        rep_offset=100.0,
        acquisition_time=1.0,
        signal_power=1e-4,
        lo_power=5e-4,
        wavelength=1e-6,
    )
    detector = DetectorModel.with_rin_dbc(nep=5e-13, rin_dbc=-170.0)
    return cfg, SampleResponse(), LOPath(), Environment(), detector
