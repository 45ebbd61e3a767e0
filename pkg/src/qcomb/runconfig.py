"""Run-configuration grammar for the command-line tool.

Configs are flat INI-style key-value files with section headers (parsed by
:mod:`configparser`, no interpolation).  Every key has a default, presets and
user files overlay the defaults, and ``--set section.key=value`` flags
overlay everything else.  The effective config (after all overlays) is what
gets hashed into output provenance, so identical hashes imply identical
numerical inputs.
"""

from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import dataclass
from typing import Optional

from .dualcomb import DualCombConfig, Environment, LOPath, SampleResponse
from .gaussian import SqueezeGain
from .mc import McMode
from .noise import DetectorModel

__all__ = [
    "ConfigError",
    "ModelInputs",
    "McSettings",
    "DEFAULT_CONFIG",
    "load_effective_config",
    "effective_lines",
    "config_hash",
    "build_inputs",
    "build_mc_settings",
]


class ConfigError(ValueError):
    """Invalid or unknown configuration; maps to CLI exit code 2."""


DEFAULT_CONFIG = """\
[comb]
n_lines = 16
rep_rate_hz = 1e8
rep_offset_hz = 1e3
wavelength_m = 1e-6
carrier_frequency_hz =
acquisition_time_s = 1.0
signal_power_w = 1e-4
lo_power_w = 5e-4
signal_gain_db = 0
lo_gain_db = 0

[sample]
transmissivity = 1.0
phase_rad = 0.0

[lo_path]
transmissivity = 1.0
phase_rad = 0.0

[environment]
temperature_k = 0.0

[detector]
nep_w_per_sqrthz = 0.0
rin_per_hz = 0.0
rin_dbc_per_hz =

[run]
m_line = 1

[sweep]
axis1 =
axis1_min =
axis1_max =
axis1_points =
axis1_scale = log
axis1_values =
axis2 =
axis2_min =
axis2_max =
axis2_points =
axis2_scale = linear
axis2_values =
hold = gamma
eta_equals_kappa = false
total_power_w = 2e-4
path_length_um = 15.0
absorption = bundled

[mc]
n_samples = 100000
seed = 42
mode = frequency_domain
sample_rate_hz =

[water]
wavelength_min_um = 0.4
wavelength_max_um = 10.0
wavelength_points = 120
wavelength_scale = log
gains_db = 0 5 10 15 20 25 30
path_length_um = 15.0
gamma = 5.0
temperature_k = 295.0
absorption = bundled
"""

_KNOWN_KEYS = {
    "comb": {
        "n_lines", "rep_rate_hz", "rep_offset_hz", "wavelength_m",
        "carrier_frequency_hz", "acquisition_time_s", "signal_power_w",
        "lo_power_w", "signal_gain_db", "lo_gain_db",
    },
    "sample": {"transmissivity", "phase_rad"},
    "lo_path": {"transmissivity", "phase_rad"},
    "environment": {"temperature_k"},
    "detector": {"nep_w_per_sqrthz", "rin_per_hz", "rin_dbc_per_hz"},
    "run": {"m_line"},
    "sweep": {
        "axis1", "axis1_min", "axis1_max", "axis1_points", "axis1_scale",
        "axis1_values", "axis2", "axis2_min", "axis2_max", "axis2_points",
        "axis2_scale", "axis2_values", "hold", "eta_equals_kappa",
        "total_power_w", "path_length_um", "absorption",
    },
    "mc": {"n_samples", "seed", "mode", "sample_rate_hz"},
    "water": {
        "wavelength_min_um", "wavelength_max_um", "wavelength_points",
        "wavelength_scale", "gains_db", "path_length_um", "gamma",
        "temperature_k", "absorption",
    },
}


@dataclass(frozen=True)
class ModelInputs:
    """Domain objects assembled from a parsed config."""

    config: DualCombConfig
    sample: SampleResponse
    lo: LOPath
    environment: Environment
    detector: DetectorModel
    m_line: int


@dataclass(frozen=True)
class McSettings:
    n_samples: int
    seed: int
    mode: McMode
    sample_rate: Optional[float]


def _new_parser() -> configparser.ConfigParser:
    return configparser.ConfigParser(interpolation=None)


def _validate_known(cp: configparser.ConfigParser) -> None:
    for section in cp.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown config section [{section}]")
        for key in cp[section]:
            if key not in _KNOWN_KEYS[section]:
                raise ConfigError(f"unknown config field {section}.{key}")


def load_effective_config(
    preset_text: Optional[str] = None,
    config_path: Optional[str] = None,
    sets: Optional[list[str]] = None,
    seed_override: Optional[int] = None,
) -> configparser.ConfigParser:
    """Layer defaults, preset, file and ``--set`` overrides into one config."""
    cp = _new_parser()
    cp.read_string(DEFAULT_CONFIG)
    if preset_text is not None:
        try:
            cp.read_string(preset_text)
        except configparser.Error as exc:
            raise ConfigError(f"bad preset: {exc}") from exc
    if config_path is not None:
        try:
            with open(config_path) as handle:
                cp.read_string(handle.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config file {config_path}: {exc}") from exc
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse config file {config_path}: {exc}") from exc
    for item in sets or []:
        target, _, value = item.partition("=")
        section, _, key = target.strip().partition(".")
        if not section or not key:
            raise ConfigError(f"--set expects section.key=value, got {item!r}")
        if not cp.has_section(section):
            cp.add_section(section)
        cp.set(section, key.strip(), value.strip())
    if seed_override is not None:
        cp.set("mc", "seed", str(seed_override))
    _validate_known(cp)
    return cp


def effective_lines(cp: configparser.ConfigParser) -> list[str]:
    """Canonical, sorted ``section.key = value`` lines of the effective config."""
    lines = []
    for section in sorted(cp.sections()):
        for key in sorted(cp[section]):
            lines.append(f"{section}.{key} = {cp.get(section, key)}")
    return lines


def config_hash(cp: configparser.ConfigParser) -> str:
    digest = hashlib.sha256("\n".join(effective_lines(cp)).encode()).hexdigest()
    return digest[:16]


def _float(cp, section, key) -> float:
    raw = cp.get(section, key)
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{section}.{key}: expected a number, got {raw!r}") from exc


def _optional_float(cp, section, key) -> Optional[float]:
    raw = cp.get(section, key).strip()
    if not raw:
        return None
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{section}.{key}: expected a number, got {raw!r}") from exc


def _int(cp, section, key) -> int:
    raw = cp.get(section, key)
    try:
        return int(float(raw))
    except ValueError as exc:
        raise ConfigError(f"{section}.{key}: expected an integer, got {raw!r}") from exc


def _bool(cp, section, key) -> bool:
    raw = cp.get(section, key).strip().lower()
    if raw in ("true", "yes", "on", "1"):
        return True
    if raw in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{section}.{key}: expected a boolean, got {raw!r}")


def build_inputs(cp: configparser.ConfigParser) -> ModelInputs:
    """Assemble the domain objects, naming the offending field on failure."""
    wavelength = _optional_float(cp, "comb", "wavelength_m")
    carrier = _optional_float(cp, "comb", "carrier_frequency_hz")
    if wavelength is not None and carrier is not None:
        raise ConfigError(
            "set exactly one of comb.wavelength_m and comb.carrier_frequency_hz"
        )
    try:
        config = DualCombConfig(
            n_lines=_int(cp, "comb", "n_lines"),
            rep_rate=_float(cp, "comb", "rep_rate_hz"),
            rep_offset=_float(cp, "comb", "rep_offset_hz"),
            acquisition_time=_float(cp, "comb", "acquisition_time_s"),
            signal_power=_float(cp, "comb", "signal_power_w"),
            lo_power=_float(cp, "comb", "lo_power_w"),
            wavelength=wavelength,
            carrier_frequency=carrier,
            signal_gain=SqueezeGain.from_db(_float(cp, "comb", "signal_gain_db")),
            lo_gain=SqueezeGain.from_db(_float(cp, "comb", "lo_gain_db")),
        )
    except ValueError as exc:
        raise ConfigError(f"comb: {exc}") from exc
    try:
        sample = SampleResponse(
            transmissivity=_float(cp, "sample", "transmissivity"),
            phase=_float(cp, "sample", "phase_rad"),
        )
    except ValueError as exc:
        raise ConfigError(f"sample: {exc}") from exc
    try:
        lo = LOPath(
            transmissivity=_float(cp, "lo_path", "transmissivity"),
            phase=_float(cp, "lo_path", "phase_rad"),
        )
    except ValueError as exc:
        raise ConfigError(f"lo_path: {exc}") from exc
    try:
        environment = Environment(temperature=_float(cp, "environment", "temperature_k"))
    except ValueError as exc:
        raise ConfigError(f"environment.temperature_k: {exc}") from exc
    rin_dbc = _optional_float(cp, "detector", "rin_dbc_per_hz")
    if rin_dbc is not None:
        rin_linear = DetectorModel.rin_from_dbc(rin_dbc)
    else:
        rin_linear = _float(cp, "detector", "rin_per_hz")
    try:
        detector = DetectorModel(
            nep=_float(cp, "detector", "nep_w_per_sqrthz"),
            rin_linear=rin_linear,
        )
    except ValueError as exc:
        raise ConfigError(f"detector: {exc}") from exc
    m_line = _int(cp, "run", "m_line")
    if not 1 <= m_line <= config.n_lines:
        raise ConfigError(f"run.m_line: {m_line} out of range 1..{config.n_lines}")
    return ModelInputs(
        config=config,
        sample=sample,
        lo=lo,
        environment=environment,
        detector=detector,
        m_line=m_line,
    )


def build_mc_settings(cp: configparser.ConfigParser) -> McSettings:
    mode_raw = cp.get("mc", "mode").strip()
    try:
        mode = McMode(mode_raw)
    except ValueError as exc:
        choices = ", ".join(m.value for m in McMode)
        raise ConfigError(f"mc.mode: expected one of {choices}, got {mode_raw!r}") from exc
    n_samples = _int(cp, "mc", "n_samples")
    if n_samples < 100:
        raise ConfigError(f"mc.n_samples: must be >= 100, got {n_samples}")
    seed = _int(cp, "mc", "seed")
    if not 0 <= seed < 2**64 or math.isnan(seed):
        raise ConfigError(f"mc.seed: must fit in 64 bits, got {seed}")
    return McSettings(
        n_samples=n_samples,
        seed=seed,
        mode=mode,
        sample_rate=_optional_float(cp, "mc", "sample_rate_hz"),
    )
