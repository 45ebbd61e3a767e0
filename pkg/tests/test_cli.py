import math

import numpy as np
import pytest

from qcomb.cli import main


def read_rows(path):
    header = None
    rows = []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            continue
        cells = line.split(",")
        if header is None:
            header = cells
        else:
            rows.append(dict(zip(header, cells)))
    return header, rows


FAST_SWEEP = [
    "--set", "comb.n_lines=1000",
    "--set", "comb.rep_offset_hz=1e3",
    "--set", "sweep.axis1_points=5",
]


class TestSnrCommand:
    def test_fig1c_point(self, capsys):
        assert main(["snr", "--preset", "fig1c"]) == 0
        out = capsys.readouterr().out
        assert "dominant term     : quad" in out
        assert "23.10" in out

    def test_csv_output(self, tmp_path):
        out = tmp_path / "snr.csv"
        assert main(["snr", "--preset", "fig1c", "--out", str(out)]) == 0
        text = out.read_text()
        assert text.startswith("# qcomb")
        assert "# config_hash:" in text
        header, rows = read_rows(out)
        assert len(rows) == 1
        assert float(rows[0]["snr"]) == pytest.approx(204.4, rel=1e-3)

    def test_set_overrides_preset(self, tmp_path):
        out = tmp_path / "snr.csv"
        assert (
            main([
                "snr", "--preset", "fig1c",
                "--set", "comb.signal_power_w=2e-4",
                "--set", "comb.lo_power_w=1e-3",
                "--out", str(out),
            ])
            == 0
        )
        _, rows = read_rows(out)
        assert float(rows[0]["signal_power_w"]) == 2e-4
        assert "comb.signal_power_w = 2e-4" in out.read_text()

    def test_requires_config_or_preset(self, capsys):
        assert main(["snr"]) == 2
        assert "required" in capsys.readouterr().err

    def test_unknown_field_named(self, capsys):
        assert main(["snr", "--preset", "fig1c", "--set", "comb.bogus=1"]) == 2
        assert "comb.bogus" in capsys.readouterr().err

    def test_bad_value_named(self, capsys):
        assert main(["snr", "--preset", "fig1c", "--set", "comb.signal_power_w=oops"]) == 2
        assert "comb.signal_power_w" in capsys.readouterr().err

    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[comb]\nn_lines = 32\nrep_offset_hz = 1e3\n")
        assert main(["snr", "--config", str(cfg)]) == 0

    def test_degenerate_config_errors(self, capsys):
        # no signal power: every noise term is undefined or zero
        assert main(["snr", "--preset", "fig1c", "--set", "comb.signal_power_w=0"]) == 2
        assert "error" in capsys.readouterr().err


class TestSweepCommand:
    def test_row_count_and_columns(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--preset", "fig1c", *FAST_SWEEP, "--out", str(out)]) == 0
        header, rows = read_rows(out)
        assert header == [
            "signal_power_w", "gain_db", "snr_db", "advantage_db",
            "sigma2_nep", "sigma2_quad", "sigma2_rin",
        ]
        assert len(rows) == 5 * 4  # 5 powers x 4 gains

    def test_fig1c_preset_full_row_count(self, tmp_path):
        # 200 log-spaced powers x 4 gain steps
        out = tmp_path / "sweep.csv"
        assert (
            main([
                "sweep", "--preset", "fig1c",
                "--set", "comb.n_lines=1000",
                "--set", "comb.rep_offset_hz=1e3",
                "--out", str(out),
            ])
            == 0
        )
        _, rows = read_rows(out)
        assert len(rows) == 800

    def test_row_major_order_and_gamma_hold(self, tmp_path):
        out = tmp_path / "sweep.csv"
        main(["sweep", "--preset", "fig1c", *FAST_SWEEP, "--out", str(out)])
        _, rows = read_rows(out)
        powers = [float(r["signal_power_w"]) for r in rows]
        gains = [float(r["gain_db"]) for r in rows]
        assert powers[:4] == [powers[0]] * 4
        assert gains[:4] == [0.0, 10.0, 20.0, 30.0]
        assert powers[0] < powers[4]

    def test_classical_row_zero_advantage(self, tmp_path):
        out = tmp_path / "sweep.csv"
        main(["sweep", "--preset", "fig1c", *FAST_SWEEP, "--out", str(out)])
        _, rows = read_rows(out)
        for row in rows:
            if row["gain_db"] == "0":
                assert float(row["advantage_db"]) == 0.0

    def test_rerun_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["sweep", "--preset", "fig1c", *FAST_SWEEP, "--out", str(a)])
        main(["sweep", "--preset", "fig1c", *FAST_SWEEP, "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_missing_axis_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[comb]\nn_lines = 32\nrep_offset_hz = 1e3\n")
        assert main(["sweep", "--config", str(cfg)]) == 2
        assert "axis1" in capsys.readouterr().err

    def test_duplicate_axes_rejected(self, capsys):
        code = main([
            "sweep", "--preset", "fig1c", *FAST_SWEEP,
            "--set", "sweep.axis2=signal_power_w",
            "--set", "sweep.axis2_values=1e-4 1e-3",
        ])
        assert code == 2
        assert "distinct" in capsys.readouterr().err

    def test_third_axis_rejected(self, capsys):
        assert main(["sweep", "--preset", "fig1c", "--set", "sweep.axis3=gamma"]) == 2
        assert "sweep.axis3" in capsys.readouterr().err

    def test_fig4_tangency(self, tmp_path):
        out = tmp_path / "fig4.csv"
        assert (
            main([
                "sweep", "--preset", "fig4",
                "--set", "comb.n_lines=1000",
                "--set", "comb.rep_offset_hz=1e3",
                "--set", "sweep.axis1_points=25",
                "--out", str(out),
            ])
            == 0
        )
        _, rows = read_rows(out)
        snrs = [float(r["snr_db"]) for r in rows]
        fractions = [float(r["power_fraction"]) for r in rows]
        assert fractions[int(np.argmax(snrs))] == pytest.approx(0.5, abs=1e-9)

    def test_fig3_large_gamma_limit(self, tmp_path):
        out = tmp_path / "fig3.csv"
        assert (
            main([
                "sweep", "--preset", "fig3",
                "--set", "comb.n_lines=1000",
                "--set", "comb.rep_offset_hz=1e3",
                "--set", "sweep.axis1_points=7",
                "--set", "sweep.axis2_values=1.0",
                "--out", str(out),
            ])
            == 0
        )
        _, rows = read_rows(out)
        top = max(rows, key=lambda r: float(r["gamma"]))
        assert float(top["gamma"]) == pytest.approx(1e3)
        # signal-only squeezing at large gamma approaches 5*log10(G)
        assert float(top["advantage_db"]) == pytest.approx(5.0, abs=0.15)

    def test_fig5_wavelength_axis(self, tmp_path):
        out = tmp_path / "fig5.csv"
        assert (
            main([
                "sweep", "--preset", "fig5",
                "--set", "comb.n_lines=64",
                "--set", "comb.rep_offset_hz=1e3",
                "--set", "sweep.axis1_points=6",
                "--set", "sweep.axis2_values=0 10",
                "--out", str(out),
            ])
            == 0
        )
        _, rows = read_rows(out)
        assert len(rows) == 12
        lossless = [r for r in rows if float(r["wavelength_um"]) < 1.0]
        assert all(float(r["advantage_db"]) < 5.01 for r in rows)
        assert any(float(r["advantage_db"]) > 4.9 for r in lossless)

    def test_plot_requires_out(self, capsys):
        assert main(["sweep", "--preset", "fig1c", *FAST_SWEEP, "--plot"]) == 2
        assert "--plot" in capsys.readouterr().err

    def test_plot_writes_svg(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert (
            main(["sweep", "--preset", "fig1c", *FAST_SWEEP, "--out", str(out), "--plot"])
            == 0
        )
        svg = tmp_path / "sweep.svg"
        assert svg.exists()
        assert b"<svg" in svg.read_bytes()[:500]


MC_FAST = ["--set", "mc.n_samples=15000"]


class TestMcVerifyCommand:
    def test_default_suite_passes(self, tmp_path, capsys):
        out = tmp_path / "mc.csv"
        code = main(["mc-verify", "--preset", "mc-default", *MC_FAST, "--out", str(out)])
        assert code == 0
        assert "checks passed" in capsys.readouterr().err
        header, rows = read_rows(out)
        assert {r["check"] for r in rows} == {
            "variance_frequency_domain", "variance_time_domain",
            "crb_sqrt_kappa", "crb_theta", "dft_identity",
        }
        assert all(r["passed"] == "true" for r in rows)
        text = out.read_text()
        assert "# rng: numpy.random.Philox" in text
        assert "# summary: 5/5 checks passed" in text

    def test_corrupted_analytic_exits_one(self, tmp_path):
        out = tmp_path / "mc.csv"
        code = main([
            "mc-verify", "--preset", "mc-default", *MC_FAST,
            "--corrupt-analytic", "1.5", "--out", str(out),
        ])
        assert code == 1
        _, rows = read_rows(out)
        assert any(r["passed"] == "false" for r in rows)

    def test_seed_flag_overrides(self, tmp_path):
        out = tmp_path / "mc.csv"
        main(["mc-verify", "--preset", "mc-default", *MC_FAST, "--seed", "7",
              "--out", str(out)])
        assert "# seed: 7" in out.read_text()

    def test_rerun_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert (
                main(["mc-verify", "--preset", "mc-default", *MC_FAST,
                      "--seed", "42", "--out", str(path)])
                == 0
            )
        assert a.read_bytes() == b.read_bytes()

    def test_different_seeds_differ(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["mc-verify", "--preset", "mc-default", *MC_FAST, "--seed", "1", "--out", str(a)])
        main(["mc-verify", "--preset", "mc-default", *MC_FAST, "--seed", "2", "--out", str(b)])
        assert a.read_bytes() != b.read_bytes()


class TestWaterCommand:
    def test_default_map(self, tmp_path):
        out = tmp_path / "water.csv"
        code = main([
            "water",
            "--set", "water.wavelength_points=8",
            "--set", "water.gains_db=0 10 20",
            "--out", str(out),
        ])
        assert code == 0
        header, rows = read_rows(out)
        assert header == [
            "wavelength_um", "alpha_per_um", "transmissivity", "gain_db", "advantage_db",
        ]
        assert len(rows) == 24

    def test_custom_absorption_file(self, tmp_path):
        table = tmp_path / "flat.csv"
        table.write_text("wavelength_um,alpha_per_um\n0.5,0.0\n11.0,0.0\n")
        out = tmp_path / "water.csv"
        code = main([
            "water", "--absorption", str(table),
            "--set", "water.wavelength_min_um=0.6",
            "--set", "water.wavelength_max_um=10.5",
            "--set", "water.wavelength_points=3",
            "--set", "water.gains_db=20",
            "--set", "water.temperature_k=0",
            "--out", str(out),
        ])
        assert code == 0
        _, rows = read_rows(out)
        for row in rows:
            assert float(row["advantage_db"]) == pytest.approx(10.0, rel=1e-9)

    def test_advantage_monotone_in_gain_per_wavelength(self, tmp_path):
        out = tmp_path / "water.csv"
        main([
            "water",
            "--set", "water.wavelength_points=6",
            "--set", "water.gains_db=0 10 20 30",
            "--out", str(out),
        ])
        _, rows = read_rows(out)
        by_wavelength = {}
        for row in rows:
            by_wavelength.setdefault(row["wavelength_um"], []).append(
                (float(row["gain_db"]), float(row["advantage_db"]))
            )
        for entries in by_wavelength.values():
            advs = [a for _, a in sorted(entries)]
            assert all(x <= y + 1e-12 for x, y in zip(advs, advs[1:]))

    def test_plot_writes_svg(self, tmp_path):
        out = tmp_path / "water.csv"
        assert (
            main([
                "water", "--set", "water.wavelength_points=4",
                "--set", "water.gains_db=0 10",
                "--out", str(out), "--plot",
            ])
            == 0
        )
        assert (tmp_path / "water.svg").exists()


class TestVersionFlag:
    def test_version(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["--version"])
        assert excinfo.value.code == 0
        assert "qcomb" in capsys.readouterr().out
