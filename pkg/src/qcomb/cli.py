"""Command-line front end: single-point SNR, sweeps, MC verification, water maps.

Exit codes: 0 success, 1 verification-check failure, 2 usage or config error.
CSV outputs start with ``#`` comment lines carrying the tool version, the
effective-config hash, the seed and the dB conventions; re-running with an
identical effective config yields byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import __version__
from .errors import DegenerateModelError
from .gaussian import SqueezeGain
from .mc import RNG_ALGORITHM, McRun, run_verification_suite
from .noise import snr_full
from .presets import PRESETS, preset_text
from .runconfig import (
    ConfigError,
    ModelInputs,
    build_inputs,
    build_mc_settings,
    config_hash,
    effective_lines,
    load_effective_config,
    _bool,
    _float,
    _int,
)
from .dualcomb import LOPath, SampleResponse
from .spectra import load_absorption_table, load_default_water_table, water_limited_advantage
from .dualcomb import Environment

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2

_CONVENTION_NOTES = [
    "snr_db: amplitude SNR in dB = 10*log10(SNR)",
    "advantage_db: 10*log10(SNR / SNR_classical) = 5*log10 of the variance ratio",
    "gain_db: squeezing gain in dB = 10*log10(G)",
]

_AXIS_NAMES = {
    "signal_power_w",
    "lo_power_w",
    "gamma",
    "gain_db",
    "signal_gain_db",
    "lo_gain_db",
    "transmissivity",
    "phase_rad",
    "power_fraction",
    "wavelength_um",
}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _write_csv(path: Optional[str], comments, fieldnames, rows) -> None:
    def emit(handle):
        for line in comments:
            handle.write(f"# {line}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([_fmt(row[name]) for name in fieldnames])

    if path is None:
        emit(sys.stdout)
    else:
        with open(path, "w", newline="") as handle:
            emit(handle)


def _provenance(cp, extra=()) -> list[str]:
    lines = [
        f"qcomb {__version__}",
        f"config_hash: {config_hash(cp)}",
        f"seed: {cp.get('mc', 'seed')}",
        *extra,
        *_CONVENTION_NOTES,
    ]
    lines.extend(f"cfg {line}" for line in effective_lines(cp))
    return lines


@dataclass(frozen=True)
class SweepAxis:
    name: str
    values: np.ndarray


@dataclass(frozen=True)
class SweepOptions:
    hold: str
    eta_equals_kappa: bool
    total_power_w: float
    path_length_um: float
    absorption: str


def _axis_from_config(cp, index: int) -> Optional[SweepAxis]:
    name = cp.get("sweep", f"axis{index}").strip()
    if not name:
        return None
    if name not in _AXIS_NAMES:
        raise ConfigError(
            f"sweep.axis{index}: unknown axis {name!r}; "
            f"choices: {', '.join(sorted(_AXIS_NAMES))}"
        )
    values_raw = cp.get("sweep", f"axis{index}_values").strip()
    if values_raw:
        values = np.array([float(v) for v in values_raw.split()])
    else:
        lo = cp.get("sweep", f"axis{index}_min").strip()
        hi = cp.get("sweep", f"axis{index}_max").strip()
        pts = cp.get("sweep", f"axis{index}_points").strip()
        if not (lo and hi and pts):
            raise ConfigError(
                f"sweep.axis{index}: give either axis{index}_values or "
                f"axis{index}_min/max/points"
            )
        lo_f, hi_f, n = float(lo), float(hi), int(float(pts))
        if not (hi_f > lo_f and n >= 2):
            raise ConfigError(f"sweep.axis{index}: degenerate range")
        scale = cp.get("sweep", f"axis{index}_scale").strip()
        if scale == "log":
            if lo_f <= 0:
                raise ConfigError(f"sweep.axis{index}: log scale needs positive bounds")
            values = np.logspace(math.log10(lo_f), math.log10(hi_f), n)
        elif scale == "linear":
            values = np.linspace(lo_f, hi_f, n)
        else:
            raise ConfigError(f"sweep.axis{index}_scale: expected log or linear")
    if values.size < 1 or np.unique(values).size != values.size:
        raise ConfigError(f"sweep.axis{index}: values must be distinct")
    return SweepAxis(name=name, values=values)


def _sweep_options(cp) -> SweepOptions:
    hold = cp.get("sweep", "hold").strip()
    if hold not in ("gamma", "lo_power"):
        raise ConfigError(f"sweep.hold: expected gamma or lo_power, got {hold!r}")
    return SweepOptions(
        hold=hold,
        eta_equals_kappa=_bool(cp, "sweep", "eta_equals_kappa"),
        total_power_w=_float(cp, "sweep", "total_power_w"),
        path_length_um=_float(cp, "sweep", "path_length_um"),
        absorption=cp.get("sweep", "absorption").strip(),
    )


def _load_table(spec: str, override: Optional[str]):
    if override:
        return load_absorption_table(override)
    if spec in ("", "bundled"):
        return load_default_water_table()
    return load_absorption_table(spec)


def _apply_axis(inputs: ModelInputs, name: str, value: float, opts: SweepOptions,
                base_gamma: float, table) -> ModelInputs:
    cfg, sample, lo = inputs.config, inputs.sample, inputs.lo
    if name == "signal_power_w":
        lo_power = base_gamma * value if opts.hold == "gamma" else cfg.lo_power
        cfg = replace(cfg, signal_power=value, lo_power=lo_power)
    elif name == "lo_power_w":
        cfg = replace(cfg, lo_power=value)
    elif name == "gamma":
        cfg = replace(cfg, lo_power=value * cfg.signal_power)
    elif name == "gain_db":
        gain = SqueezeGain.from_db(value)
        cfg = replace(cfg, signal_gain=gain, lo_gain=gain)
    elif name == "signal_gain_db":
        cfg = replace(cfg, signal_gain=SqueezeGain.from_db(value))
    elif name == "lo_gain_db":
        cfg = replace(cfg, lo_gain=SqueezeGain.from_db(value))
    elif name == "transmissivity":
        sample = SampleResponse(transmissivity=value, phase=sample.phase)
        if opts.eta_equals_kappa:
            lo = LOPath(transmissivity=value, phase=lo.phase)
    elif name == "phase_rad":
        sample = SampleResponse(transmissivity=sample.transmissivity, phase=value)
    elif name == "power_fraction":
        if not 0.0 < value < 1.0:
            raise ConfigError(f"power_fraction values must be in (0, 1), got {value}")
        cfg = replace(
            cfg,
            signal_power=value * opts.total_power_w,
            lo_power=(1.0 - value) * opts.total_power_w,
        )
    elif name == "wavelength_um":
        kappa = math.exp(-table.alpha(value) * opts.path_length_um)
        cfg = replace(cfg, wavelength=value * 1e-6, carrier_frequency=None)
        sample = SampleResponse(transmissivity=kappa, phase=sample.phase)
        if opts.eta_equals_kappa:
            lo = LOPath(transmissivity=kappa, phase=lo.phase)
    else:  # pragma: no cover - guarded by _AXIS_NAMES
        raise ConfigError(f"unhandled axis {name}")
    return replace(inputs, config=cfg, sample=sample, lo=lo)


def _evaluate_point(inputs: ModelInputs) -> dict:
    nb = snr_full(
        inputs.config, inputs.sample, inputs.lo, inputs.environment,
        inputs.detector, inputs.m_line,
    )
    if inputs.config.signal_gain.g == 1.0 and inputs.config.lo_gain.g == 1.0:
        advantage = 0.0
    else:
        classical = replace(
            inputs.config, signal_gain=SqueezeGain(), lo_gain=SqueezeGain()
        )
        nb_cl = snr_full(
            classical, inputs.sample, inputs.lo, inputs.environment,
            inputs.detector, inputs.m_line,
        )
        advantage = 10.0 * math.log10(nb.snr / nb_cl.snr)
    return {
        "snr_db": nb.snr_db,
        "advantage_db": advantage,
        "sigma2_nep": nb.sigma2_nep,
        "sigma2_quad": nb.sigma2_quad,
        "sigma2_rin": nb.sigma2_rin,
    }


def _effective_config(args):
    preset = preset_text(args.preset) if args.preset else None
    if preset is None and args.config is None:
        raise ConfigError("one of --config or --preset is required")
    return load_effective_config(
        preset_text=preset,
        config_path=args.config,
        sets=args.set,
        seed_override=args.seed,
    )


def cmd_snr(args) -> int:
    cp = _effective_config(args)
    inputs = build_inputs(cp)
    nb = snr_full(
        inputs.config, inputs.sample, inputs.lo, inputs.environment,
        inputs.detector, inputs.m_line,
    )
    print(f"line m            : {inputs.m_line}")
    print(f"signal power (W)  : {_fmt(inputs.config.signal_power)}")
    print(f"lo power (W)      : {_fmt(inputs.config.lo_power)}")
    print(f"sigma2_nep        : {_fmt(nb.sigma2_nep)}")
    print(f"sigma2_quad       : {_fmt(nb.sigma2_quad)}")
    print(f"sigma2_rin        : {_fmt(nb.sigma2_rin)}")
    print(f"snr (linear)      : {_fmt(nb.snr)}")
    print(f"snr (dB)          : {_fmt(nb.snr_db)}")
    print(f"dominant term     : {nb.dominant}")
    if args.out:
        row = {
            "config_hash": config_hash(cp),
            "m_line": inputs.m_line,
            "signal_power_w": inputs.config.signal_power,
            "lo_power_w": inputs.config.lo_power,
            "sigma2_nep": nb.sigma2_nep,
            "sigma2_quad": nb.sigma2_quad,
            "sigma2_rin": nb.sigma2_rin,
            "snr": nb.snr,
            "snr_db": nb.snr_db,
            "dominant": nb.dominant,
        }
        _write_csv(args.out, _provenance(cp), list(row), [row])
    return EXIT_OK


def cmd_sweep(args) -> int:
    cp = _effective_config(args)
    base = build_inputs(cp)
    opts = _sweep_options(cp)
    axis1 = _axis_from_config(cp, 1)
    axis2 = _axis_from_config(cp, 2)
    if axis1 is None:
        raise ConfigError("sweep.axis1: no sweep axis configured")
    if axis2 is not None and axis2.name == axis1.name:
        raise ConfigError("sweep axes must be distinct")
    axes = [ax for ax in (axis1, axis2) if ax is not None]
    table = None
    if any(ax.name == "wavelength_um" for ax in axes):
        table = _load_table(opts.absorption, getattr(args, "absorption", None))
    base_gamma = base.config.gamma
    fieldnames = [ax.name for ax in axes] + [
        "snr_db", "advantage_db", "sigma2_nep", "sigma2_quad", "sigma2_rin",
    ]
    rows = []
    for v1 in axis1.values:
        point1 = _apply_axis(base, axis1.name, float(v1), opts, base_gamma, table)
        inner = axis2.values if axis2 is not None else [None]
        for v2 in inner:
            point = point1
            if axis2 is not None:
                point = _apply_axis(point1, axis2.name, float(v2), opts, base_gamma, table)
            row = {axis1.name: float(v1)}
            if axis2 is not None:
                row[axis2.name] = float(v2)
            row.update(_evaluate_point(point))
            rows.append(row)
    _write_csv(args.out, _provenance(cp), fieldnames, rows)
    if args.plot:
        _render_sweep_plot(args, axes, rows)
    return EXIT_OK


def cmd_mc_verify(args) -> int:
    cp = _effective_config(args)
    inputs = build_inputs(cp)
    settings = build_mc_settings(cp)
    mc_run = McRun(
        config=inputs.config,
        sample=inputs.sample,
        lo=inputs.lo,
        environment=inputs.environment,
        seed=settings.seed,
        n_samples=settings.n_samples,
        mode=settings.mode,
        sample_rate=settings.sample_rate,
    )
    results = run_verification_suite(
        mc_run, m=inputs.m_line, corrupt_analytic=args.corrupt_analytic
    )
    n_pass = sum(r.passed for r in results)
    rows = [
        {
            "check": r.check,
            "config_hash": config_hash(cp),
            "analytic": r.analytic,
            "empirical": r.empirical,
            "z_score": r.z_score,
            "tolerance": r.tolerance,
            "passed": r.passed,
        }
        for r in results
    ]
    comments = _provenance(cp, extra=[
        f"rng: {RNG_ALGORITHM}",
        "z_score: test statistic; a check passes iff |z_score| <= tolerance",
        f"summary: {n_pass}/{len(results)} checks passed",
    ])
    fields = ["check", "config_hash", "analytic", "empirical", "z_score", "tolerance", "passed"]
    _write_csv(args.out, comments, fields, rows)
    print(f"mc-verify: {n_pass}/{len(results)} checks passed", file=sys.stderr)
    return EXIT_OK if n_pass == len(results) else EXIT_CHECK_FAILED


def cmd_water(args) -> int:
    preset = preset_text(args.preset) if args.preset else None
    cp = load_effective_config(
        preset_text=preset, config_path=args.config, sets=args.set, seed_override=args.seed
    )
    table = _load_table(cp.get("water", "absorption").strip(), args.absorption)
    lo_um = _float(cp, "water", "wavelength_min_um")
    hi_um = _float(cp, "water", "wavelength_max_um")
    points = _int(cp, "water", "wavelength_points")
    scale = cp.get("water", "wavelength_scale").strip()
    if not (hi_um > lo_um > 0.0 and points >= 2):
        raise ConfigError("water: degenerate wavelength range")
    if scale == "log":
        grid = np.logspace(math.log10(lo_um), math.log10(hi_um), points)
    elif scale == "linear":
        grid = np.linspace(lo_um, hi_um, points)
    else:
        raise ConfigError(f"water.wavelength_scale: expected log or linear, got {scale!r}")
    gains_db = [float(v) for v in cp.get("water", "gains_db").split()]
    if not gains_db:
        raise ConfigError("water.gains_db: at least one gain required")
    length = _float(cp, "water", "path_length_um")
    gamma = _float(cp, "water", "gamma")
    env = Environment(temperature=_float(cp, "water", "temperature_k"))
    rows = []
    for lam in grid:
        alpha = table.alpha(float(lam))
        kappa = math.exp(-alpha * length)
        for gain_db in gains_db:
            adv = water_limited_advantage(
                table, float(lam), length, SqueezeGain.from_db(gain_db), gamma, env
            )
            rows.append(
                {
                    "wavelength_um": float(lam),
                    "alpha_per_um": alpha,
                    "transmissivity": kappa,
                    "gain_db": gain_db,
                    "advantage_db": adv,
                }
            )
    fields = ["wavelength_um", "alpha_per_um", "transmissivity", "gain_db", "advantage_db"]
    _write_csv(args.out, _provenance(cp), fields, rows)
    if args.plot:
        _render_water_plot(args, rows)
    return EXIT_OK


def _require_out_for_plot(args) -> str:
    if not args.out:
        raise ConfigError("--plot requires --out to derive the SVG path")
    stem = args.out[:-4] if args.out.endswith(".csv") else args.out
    return stem + ".svg"


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _render_sweep_plot(args, axes, rows) -> None:
    plt = _pyplot()
    path = _require_out_for_plot(args)
    axis1 = axes[0]
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    if len(axes) == 2 and axes[1].values.size > 8:
        x = axis1.values
        y = axes[1].values
        z = np.array([row["advantage_db"] for row in rows]).reshape(x.size, y.size)
        mesh = ax.pcolormesh(x, y, z.T, shading="nearest")
        fig.colorbar(mesh, ax=ax, label="advantage_db")
        ax.set_ylabel(axes[1].name)
    else:
        groups = [None] if len(axes) == 1 else axes[1].values
        n2 = 1 if len(axes) == 1 else axes[1].values.size
        snr = np.array([row["snr_db"] for row in rows]).reshape(axis1.values.size, n2)
        for j, g in enumerate(groups):
            label = None if g is None else f"{axes[1].name}={_fmt(float(g))}"
            ax.plot(axis1.values, snr[:, j], label=label)
        ax.set_ylabel("snr_db")
        if len(axes) == 2:
            ax.legend(fontsize=8)
    if np.all(axis1.values > 0) and axis1.values.size > 2:
        ratios = np.diff(np.log(axis1.values))
        if np.allclose(ratios, ratios[0], rtol=1e-6):
            ax.set_xscale("log")
    ax.set_xlabel(axis1.name)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _render_water_plot(args, rows) -> None:
    plt = _pyplot()
    path = _require_out_for_plot(args)
    lams = sorted({row["wavelength_um"] for row in rows})
    gains = sorted({row["gain_db"] for row in rows})
    z = np.array([row["advantage_db"] for row in rows]).reshape(len(lams), len(gains))
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    mesh = ax.pcolormesh(np.array(lams), np.array(gains), z.T, shading="nearest")
    fig.colorbar(mesh, ax=ax, label="advantage_db")
    ax.set_xscale("log")
    ax.set_xlabel("wavelength_um")
    ax.set_ylabel("gain_db")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _add_common(parser: argparse.ArgumentParser, absorption: bool = False) -> None:
    parser.add_argument("--config", help="run-config file (INI key-value format)")
    parser.add_argument(
        "--preset",
        choices=sorted(PRESETS),
        help="named built-in config (overridable with --set)",
    )
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override one config field (repeatable; wins over file values)",
    )
    parser.add_argument("--out", help="write CSV here (default: stdout)")
    parser.add_argument("--plot", action="store_true", help="also render an SVG next to --out")
    parser.add_argument("--seed", type=int, help="override mc.seed")
    if absorption:
        parser.add_argument("--absorption", help="absorption table CSV (default: bundled water)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcomb",
        description="Quantum dual-comb spectroscopy noise budgets and verification",
    )
    parser.add_argument("--version", action="version", version=f"qcomb {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_snr = sub.add_parser("snr", help="single-point SNR and noise breakdown")
    _add_common(p_snr)
    p_snr.set_defaults(func=cmd_snr)

    p_sweep = sub.add_parser("sweep", help="1D/2D parameter sweep to CSV")
    _add_common(p_sweep, absorption=True)
    p_sweep.set_defaults(func=cmd_sweep)

    p_mc = sub.add_parser("mc-verify", help="Monte-Carlo verification suite")
    _add_common(p_mc)
    p_mc.add_argument(
        "--corrupt-analytic",
        type=float,
        default=1.0,
        help=argparse.SUPPRESS,  # testing hook: scales analytic reference values
    )
    p_mc.set_defaults(func=cmd_mc_verify)

    p_water = sub.add_parser("water", help="absorption-limited advantage map")
    _add_common(p_water, absorption=True)
    p_water.set_defaults(func=cmd_water)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DegenerateModelError) as exc:
        print(f"qcomb: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"qcomb: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def run() -> None:
    raise SystemExit(main())
