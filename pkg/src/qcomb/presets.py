"""Named sweep presets reproducing the reference figure datasets.

Each preset is a config overlay on the package defaults (see
``runconfig.DEFAULT_CONFIG``); everything remains overridable with
``--set``.  All presets keep the LO-to-signal power ratio at 5 and quote
squeezing gains in dB (``10*log10(g)``).
"""

from __future__ import annotations

__all__ = ["PRESETS", "preset_text"]

# Practical-SNR-vs-power curves: 200 log-spaced signal powers, both combs
# squeezed at equal gain stepped 0..30 dB, NEP 5e-13 W/rtHz, RIN -170 dBc/Hz,
# gamma held at 5 while power sweeps.
_FIG1C = """\
[comb]
n_lines = 100000
rep_offset_hz = 100
signal_power_w = 1e-4
lo_power_w = 5e-4

[detector]
nep_w_per_sqrthz = 5e-13
rin_dbc_per_hz = -170

[sweep]
axis1 = signal_power_w
axis1_min = 1e-7
axis1_max = 1e-1
axis1_points = 200
axis1_scale = log
axis2 = gain_db
axis2_values = 0 10 20 30
hold = gamma
"""

# Ideal (noise-free) advantage map over power ratio and sample transmissivity
# with the signal comb squeezed 10 dB and the LO classical.
_FIG3 = """\
[comb]
n_lines = 100000
rep_offset_hz = 100
signal_power_w = 1e-3
lo_power_w = 5e-3
signal_gain_db = 10
lo_gain_db = 0

[sweep]
axis1 = gamma
axis1_min = 1e-3
axis1_max = 1e3
axis1_points = 61
axis1_scale = log
axis2 = transmissivity
axis2_min = 0.02
axis2_max = 1.0
axis2_points = 50
axis2_scale = linear
"""

# Fixed-total-power diagonal scan with the LO sent through the sample
# (eta = kappa); SNR is maximized where the two powers are equal.
_FIG4 = """\
[comb]
n_lines = 100000
rep_offset_hz = 100
signal_gain_db = 10
lo_gain_db = 10

[detector]
nep_w_per_sqrthz = 5e-13
rin_dbc_per_hz = -170

[sweep]
axis1 = power_fraction
axis1_min = 0.01
axis1_max = 0.99
axis1_points = 101
axis1_scale = linear
total_power_w = 2e-4
eta_equals_kappa = true
"""

# Water-absorption-limited advantage map: wavelength sweep against the
# bundled absorption table at 15 um path length, room temperature, no
# detector noise, both combs squeezed at the stepped gain.
_FIG5 = """\
[comb]
n_lines = 100000
rep_offset_hz = 100
signal_power_w = 1e-4
lo_power_w = 5e-4

[environment]
temperature_k = 295

[sweep]
axis1 = wavelength_um
axis1_min = 0.4
axis1_max = 10.0
axis1_points = 120
axis1_scale = log
axis2 = gain_db
axis2_values = 0 5 10 15 20 25 30
path_length_um = 15.0
absorption = bundled
hold = gamma
"""

# Small classical lossless configuration for Monte-Carlo verification runs.
_MC_DEFAULT = """\
[comb]
n_lines = 8
rep_offset_hz = 1e3
signal_power_w = 1e-6
lo_power_w = 5e-6

[mc]
n_samples = 100000
seed = 42
"""

PRESETS = {
    "fig1c": _FIG1C,
    "fig3": _FIG3,
    "fig4": _FIG4,
    "fig5": _FIG5,
    "mc-default": _MC_DEFAULT,
}


def preset_text(name: str) -> str:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
