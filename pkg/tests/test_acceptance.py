"""Acceptance suite: one test per shipped criterion, at its stated tolerance.

Each test prints a single [PASS]/[FAIL] line (run pytest with -s to see them
on success) and then asserts.
"""

import math
import subprocess
import sys
import time
import warnings
from dataclasses import replace

import numpy as np
import pytest
from scipy.constants import c, h
from scipy.optimize import brentq

from qcomb import (
    AbsorptionTable,
    DetectorModel,
    Environment,
    LOPath,
    McMode,
    McRun,
    SampleResponse,
    SqueezeGain,
    interferogram_line_spectrum,
    joint_quadrature_variance,
    joint_quadrature_variance_from_state,
    mean_ac_spectrum,
    quad_coefficient,
    saturation_thresholds,
    sigma_nep,
    sigma_quad,
    sigma_rin,
    snr_full,
    snr_with_terms,
    synthesize_interferogram,
    thermal_occupation,
    tmsv_state,
    verify_crb,
    verify_variance,
)

from conftest import make_config, power_for_line_photons


def report(criterion, passed, detail):
    print(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    assert passed, f"{criterion}: {detail}"


def fig1c_config(signal_power=1e-4, gain=1.0):
    return replace(
        make_config(
            n_lines=100_000, rep_offset=100.0, signal_power=signal_power, gamma=5.0
        ),
        signal_gain=SqueezeGain(gain),
        lo_gain=SqueezeGain(gain),
    )


FIG1C_DETECTOR = DetectorModel.with_rin_dbc(nep=5e-13, rin_dbc=-170.0)


def test_criterion_1_beat_variance_closed_form():
    start = time.perf_counter()
    ok_unity = all(
        joint_quadrature_variance(SqueezeGain(1.0), theta) == 1.0
        for theta in np.linspace(-7.0, 7.0, 23)
    )
    ok_min = all(
        abs(joint_quadrature_variance(SqueezeGain(g), 0.0) - 1.0 / g) <= 1e-12 / g
        for g in (1.0, 2.5, 10.0, 123.456, 1000.0)
    )
    rng = np.random.default_rng(2024)
    worst = 0.0
    ok_cov = True
    for _ in range(100):
        gain = SqueezeGain(10.0 ** rng.uniform(0.0, 3.0))
        theta = rng.uniform(0.0, 2.0 * math.pi)
        closed = joint_quadrature_variance(gain, theta)
        from_cov = joint_quadrature_variance_from_state(tmsv_state(gain), theta)
        ok_cov &= bool(np.isclose(from_cov, closed, rtol=1e-10, atol=1e-10))
        worst = max(worst, abs(from_cov - closed) / max(1.0, closed))
    elapsed = time.perf_counter() - start
    report(
        "criterion 1 (beat-variance closed form)",
        ok_unity and ok_min and ok_cov and elapsed < 1.0,
        f"G=1 unity: {ok_unity}, 1/G at matched phase: {ok_min}, "
        f"covariance path worst dev {worst:.2e}, runtime {elapsed:.3f}s",
    )


def test_criterion_2_classical_recovery():
    sample, lo, env = SampleResponse(), LOPath(), Environment()
    worst = 0.0
    for gamma in (0.2, 1.0, 5.0, 100.0):
        cfg = make_config(gamma=gamma)
        got = quad_coefficient(cfg, sample, lo, env, 1)
        expected = (1.0 + 1.0 / gamma) / 4.0
        worst = max(worst, abs(got - expected) / expected)
    from qcomb import classical_coefficients

    c_sq_ok = all(classical_coefficients(g).c_gamma_sq == 0.25 for g in (0.2, 1.0, 5.0, 100.0))
    report(
        "criterion 2 (classical coefficient recovery)",
        worst <= 1e-12 and c_sq_ok,
        f"c_gamma worst relative deviation {worst:.2e}, c_gamma_sq == 1/4: {c_sq_ok}",
    )


def test_criterion_3_reference_advantage_numbers():
    start = time.perf_counter()
    sample, lo, env = SampleResponse(), LOPath(), Environment()
    powers = np.logspace(-7, -1, 601)
    best = -math.inf
    for p in powers:
        snr_q = snr_full(fig1c_config(p, 10.0), sample, lo, env, FIG1C_DETECTOR, 1).snr
        snr_c = snr_full(fig1c_config(p, 1.0), sample, lo, env, FIG1C_DETECTOR, 1).snr
        best = max(best, 10.0 * math.log10(snr_q / snr_c))
    nb = snr_full(fig1c_config(), sample, lo, env, FIG1C_DETECTOR, 1)
    p_star = math.sqrt(nb.a_nep / nb.a_rin)
    at_star = fig1c_config(p_star)
    nep_only = snr_with_terms(at_star, sample, lo, env, FIG1C_DETECTOR, 1,
                              quad=False, rin=False)
    full = snr_full(at_star, sample, lo, env, FIG1C_DETECTOR, 1).snr
    ultimate = 10.0 * math.log10(nep_only / full)
    elapsed = time.perf_counter() - start
    ok = (
        abs(best - 4.9) <= 0.2
        and abs(p_star - 1.0e-4) <= 0.1e-4
        and abs(ultimate - 13.4) <= 0.3
        and elapsed < 10.0
    )
    report(
        "criterion 3 (reference advantage numbers)",
        ok,
        f"max advantage {best:.2f} dB (want 4.9±0.2), NEP-limit advantage "
        f"{ultimate:.2f} dB at P_S={p_star:.3g} W (want 13.4±0.3), runtime {elapsed:.2f}s",
    )


def test_criterion_4_saturation_thresholds_match_crossings():
    rng = np.random.default_rng(7)
    sample_lo_env = (LOPath(), Environment())
    worst = 0.0
    for _ in range(20):
        gain = SqueezeGain.from_db(rng.uniform(1.0, 30.0))
        gamma = 10.0 ** rng.uniform(-1.5, 2.0)
        kappa = rng.uniform(0.05, 1.0)
        det = DetectorModel(
            nep=10.0 ** rng.uniform(-14.5, -12.0),
            rin_linear=10.0 ** rng.uniform(-18.0, -15.0),
        )
        wavelength = rng.uniform(0.6e-6, 8e-6)
        sample = SampleResponse(transmissivity=kappa)
        lo, env = sample_lo_env

        def cfg_at(p):
            return make_config(
                n_lines=4, signal_power=p, gamma=gamma, wavelength=wavelength,
                signal_gain=gain.g, lo_gain=gain.g,
            )

        def log_ratio_nep(log_p):
            p = 10.0**log_p
            return math.log10(
                sigma_nep(cfg_at(p), sample, lo, det, 1)
                / sigma_quad(cfg_at(p), sample, lo, env, 1)
            )

        def log_ratio_rin(log_p):
            p = 10.0**log_p
            return math.log10(
                sigma_rin(cfg_at(p), det) / sigma_quad(cfg_at(p), sample, lo, env, 1)
            )

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # bracket endpoints probe unphysical powers
            crossing_nep = 10.0 ** brentq(log_ratio_nep, -16.0, 10.0, xtol=1e-13)
            crossing_rin = 10.0 ** brentq(log_ratio_rin, -16.0, 10.0, xtol=1e-13)
        thresholds = saturation_thresholds(gain, gamma, kappa, det, c / wavelength)
        worst = max(
            worst,
            abs(thresholds.nep_power - crossing_nep) / crossing_nep,
            abs(thresholds.rin_power - crossing_rin) / crossing_rin,
        )
    report(
        "criterion 4 (saturation thresholds vs numeric crossings)",
        worst <= 0.01,
        f"worst relative deviation over 20 random parameter sets: {worst:.2e} (limit 1%)",
    )


def test_criterion_5_monte_carlo_variance_oracle():
    start = time.perf_counter()
    cfg = make_config()
    configs = {
        "classical lossless": (make_config(), SampleResponse(), Environment()),
        "both squeezed G=10": (
            make_config(signal_gain=10.0, lo_gain=10.0), SampleResponse(), Environment(),
        ),
        "kappa=0.5, occupation 0.01": (
            make_config(), SampleResponse(transmissivity=0.5),
            Environment.from_occupation(0.01, cfg.carrier_frequency),
        ),
    }
    details = []
    ok = True
    for i, (label, (config, sample, env)) in enumerate(configs.items()):
        run = McRun(
            config=config, sample=sample, lo=LOPath(), environment=env,
            seed=1000 + i, n_samples=100_000,
        )
        rep = verify_variance(run, 1, tolerance_sigmas=3.0)
        ok &= rep.passed
        details.append(f"{label}: z={rep.z_score:+.2f}")
    elapsed = time.perf_counter() - start
    report(
        "criterion 5 (Monte-Carlo variance oracle)",
        ok and elapsed < 60.0,
        "; ".join(details) + f"; runtime {elapsed:.1f}s (limit 60s)",
    )


def test_criterion_6_crb_verification():
    # moderate-SNR classical configuration (SNR >= 10) and a squeezed twin
    photons = 4000.0
    power = power_for_line_photons(photons, 8)
    classical_run = McRun(
        config=make_config(signal_power=power, gamma=5.0),
        sample=SampleResponse(), lo=LOPath(), environment=Environment(),
        seed=5, n_samples=10_000,
    )
    squeezed_run = McRun(
        config=make_config(signal_power=power, gamma=5.0, signal_gain=10.0, lo_gain=10.0),
        sample=SampleResponse(), lo=LOPath(), environment=Environment(),
        seed=6, n_samples=10_000,
    )
    rep_c = verify_crb(classical_run, 1, true_kappa=1.0, true_theta=0.0)
    rep_s = verify_crb(squeezed_run, 1, true_kappa=1.0, true_theta=0.0)
    reduction_kappa = rep_c.mse_sqrt_kappa / rep_s.mse_sqrt_kappa
    reduction_theta = rep_c.mse_theta / rep_s.mse_theta
    ok = (
        rep_c.snr >= 10.0
        and all(
            abs(r - 1.0) <= 0.15
            for r in (
                rep_c.ratio_sqrt_kappa, rep_c.ratio_theta,
                rep_s.ratio_sqrt_kappa, rep_s.ratio_theta,
            )
        )
        and abs(reduction_kappa - 10.0) <= 1.5
        and abs(reduction_theta - 10.0) <= 1.5
    )
    report(
        "criterion 6 (Cramer-Rao verification)",
        ok,
        f"SNR={rep_c.snr:.1f}, MSE/CRB classical=({rep_c.ratio_sqrt_kappa:.3f}, "
        f"{rep_c.ratio_theta:.3f}), squeezed=({rep_s.ratio_sqrt_kappa:.3f}, "
        f"{rep_s.ratio_theta:.3f}), MSE reduction=({reduction_kappa:.2f}, "
        f"{reduction_theta:.2f}) for G=10",
    )


def test_criterion_7_time_domain_identity():
    worst = 0.0
    for n_lines in (1, 4, 8, 16):
        run = McRun(
            config=make_config(n_lines=n_lines),
            sample=SampleResponse(0.8, 0.3),
            lo=LOPath(0.9, -0.2),
            environment=Environment(),
            seed=0, n_samples=100,
        )
        _, series = synthesize_interferogram(run)
        recovered = interferogram_line_spectrum(series, run.config)
        expected = np.array(
            [mean_ac_spectrum(run.config, run.sample, run.lo, m) for m in range(1, n_lines + 1)]
        )
        worst = max(
            worst, float(np.max(np.abs(recovered - expected)) / np.max(np.abs(expected)))
        )
    report(
        "criterion 7 (interferogram DFT identity)",
        worst <= 1e-6,
        f"worst per-line relative error over N in (1,4,8,16): {worst:.2e} (limit 1e-6)",
    )


def test_criterion_8_thermal_occupation_anchors():
    env = Environment(temperature=300.0)
    at_10um = thermal_occupation(c / 10e-6, env)
    at_5um = thermal_occupation(c / 5e-6, env)
    ok = abs(at_10um - 0.0083) <= 0.0002 and at_5um <= 1e-4
    report(
        "criterion 8 (thermal occupation anchors)",
        ok,
        f"occupation(300K, 10um)={at_10um:.5f} (want 0.0083±0.0002), "
        f"occupation(300K, 5um)={at_5um:.2e} (want <=1e-4)",
    )


def test_criterion_9_property_suite():
    # (a) RIN noise identical across power ratios
    det = FIG1C_DETECTOR
    values = [
        sigma_rin(make_config(gamma=g, rep_offset=1e3), det) for g in (0.1, 1.0, 10.0)
    ]
    rin_ok = max(values) - min(values) <= 1e-12 * max(values)

    # (b) fixed-total-power tangency on a 101-point diagonal (eta = kappa)
    tangency_ok = True
    for kappa in (1.0, 0.5):
        sample, lo = SampleResponse(kappa), LOPath(kappa)
        fractions = np.linspace(0.01, 0.99, 101)
        snrs = [
            snr_full(
                make_config(
                    n_lines=4, signal_power=f * 2e-4, gamma=(1 - f) / f,
                    signal_gain=10.0, lo_gain=10.0,
                ),
                sample, lo, Environment(), det, 1,
            ).snr
            for f in fractions
        ]
        tangency_ok &= bool(abs(fractions[int(np.argmax(snrs))] - 0.5) < 1e-9)

    # (c) water map: advantage grows with gain, shrinks with absorption
    from qcomb import load_default_water_table, water_limited_advantage

    table = load_default_water_table()
    env = Environment(295.0)
    gain_ok = True
    for lam in np.geomspace(0.45, 9.5, 12):
        advs = [
            water_limited_advantage(table, lam, 15.0, SqueezeGain.from_db(db), 5.0, env)
            for db in (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
        ]
        gain_ok &= all(a <= b + 1e-12 for a, b in zip(advs, advs[1:]))
    absorption_ok = True
    gain = SqueezeGain(10.0)
    advs = [
        water_limited_advantage(
            AbsorptionTable(np.array([1.9, 2.1]), np.array([a, a])), 2.0, 15.0,
            gain, 5.0, env,
        )
        for a in np.logspace(-6, 0.5, 50)
    ]
    absorption_ok = all(x >= y - 1e-12 for x, y in zip(advs, advs[1:]))

    report(
        "criterion 9 (property suite)",
        rin_ok and tangency_ok and gain_ok and absorption_ok,
        f"RIN gamma-independence: {rin_ok}, equal-power tangency: {tangency_ok}, "
        f"advantage monotone in gain: {gain_ok}, anti-monotone in absorption: "
        f"{absorption_ok}",
    )


def test_criterion_10_deterministic_verification_cli(tmp_path):
    outputs = []
    codes = []
    for name in ("first.csv", "second.csv"):
        out = tmp_path / name
        proc = subprocess.run(
            [
                sys.executable, "-m", "qcomb", "mc-verify",
                "--preset", "mc-default", "--seed", "42", "--out", str(out),
            ],
            capture_output=True,
            text=True,
        )
        codes.append(proc.returncode)
        outputs.append(out.read_bytes())
    identical = outputs[0] == outputs[1]
    ok = identical and codes == [0, 0]
    report(
        "criterion 10 (deterministic mc-verify CLI)",
        ok,
        f"exit codes {codes}, byte-identical outputs: {identical} "
        f"({len(outputs[0])} bytes)",
    )
