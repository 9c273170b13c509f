"""Config loading and command-line workflow tests."""

import csv
import json
import math

import pytest

from hlf_aoi import cli
from hlf_aoi.config import (ConfigError, default_config_path, load_config,
                            parse_quantity)

MINIMAL_NETWORK = """
[network]
tx_power = "1 W"
noise = "-100 dBm/Hz"
bandwidth = "1 MHz"
packet_size = "500 Kb"
bs_density = "10 /km^2"
source_density = "10 /km^2"
pathloss_exponent = 4.0
target_stp = 0.6
gen_rate = "15 /s"
"""


class TestParseQuantity:
    @pytest.mark.parametrize("text,expected", [
        ("1 W", 1.0),
        ("200 mW", 0.2),
        ("-100 dBm/Hz", 1e-13),
        ("-100 dBm", 1e-13),
        ("0 dBW", 1.0),
        ("1 MHz", 1e6),
        ("2.5 kHz", 2500.0),
        ("500 Kb", 5e5),
        ("1.2 Mb", 1.2e6),
        ("10 /km^2", 1e-5),
        ("3 /m^2", 3.0),
        ("0.05 s", 0.05),
        ("50 ms", 0.05),
        ("15 /s", 15.0),
        ("42", 42.0),
    ])
    def test_conversions(self, text, expected):
        assert parse_quantity(text) == pytest.approx(expected, rel=1e-12)

    def test_bare_numbers_pass_through(self):
        assert parse_quantity(7) == 7.0
        assert parse_quantity(0.25) == 0.25

    @pytest.mark.parametrize("bad", ["1 parsec", "watts", "", "1 2 W", True])
    def test_rejects_garbage(self, bad):
        with pytest.raises(ConfigError):
            parse_quantity(bad)


class TestLoadConfig:
    def test_packaged_defaults(self):
        cfg = load_config()
        net = cfg.network
        assert net.tx_power == 1.0
        assert net.noise_psd == pytest.approx(1e-13)
        assert net.bandwidth == 1e6
        assert net.packet_size == 5e5
        assert net.bs_density == pytest.approx(1e-5)
        assert net.gen_rate == 15.0
        assert cfg.pipeline is not None
        assert cfg.fits is not None and len(cfg.fits) == 8
        assert cfg.fits[0.4].shape == 5.94
        assert cfg.output_format == "csv"
        assert default_config_path().exists()

    def test_units_applied_from_file(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text(MINIMAL_NETWORK.replace('"10 /km^2"', '"2e-5 /m^2"'))
        cfg = load_config(path)
        assert cfg.network.bs_density == pytest.approx(2e-5)
        assert cfg.pipeline is None and cfg.fits is None

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.toml")

    def test_invalid_toml(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("[network\noops")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_unknown_field_named(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text(MINIMAL_NETWORK + 'shoe_size = 11\n')
        with pytest.raises(ConfigError, match="shoe_size"):
            load_config(path)

    def test_unknown_unit_named(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text(MINIMAL_NETWORK.replace('"1 W"', '"1 horsepower"'))
        with pytest.raises(ConfigError, match="tx_power"):
            load_config(path)

    def test_bad_seeds(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text(MINIMAL_NETWORK + "[run]\nseeds = []\n")
        with pytest.raises(ConfigError, match="seeds"):
            load_config(path)

    def test_bad_fit_entry(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text(MINIMAL_NETWORK + '[fits]\n"0.4" = [5.94]\n')
        with pytest.raises(ConfigError, match="0.4"):
            load_config(path)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestAnalyze:
    def test_empty_grid_succeeds(self, tmp_path, capsys):
        out = tmp_path / "table.csv"
        code = cli.main(["analyze", "--v-grid", "5:4:1", "--seed", "1",
                         "--out", str(out)])
        assert code == 0
        assert read_csv(out) == []

    def test_boundary_rows_flagged(self, tmp_path):
        out = tmp_path / "table.csv"
        code = cli.main(["analyze", "--zeta-grid", "0.9", "--v-grid", "1:1:1",
                         "--seed", "1", "--mc-cycles", "10000",
                         "--out", str(out)])
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 1
        assert rows[0]["flag"] == "boundary"
        assert float(rows[0]["prob_quadrature"]) == 1.0

    def test_curves_monotone_decreasing(self, tmp_path):
        out = tmp_path / "table.csv"
        code = cli.main(["analyze", "--zeta-grid", "0.4,0.6,0.8",
                         "--v-grid", "3:8:0.5", "--seed", "2",
                         "--mc-cycles", "10000", "--out", str(out)])
        assert code == 0
        rows = read_csv(out)
        for zeta in ("0.4", "0.6", "0.8"):
            curve = [float(r["prob_quadrature"]) for r in rows
                     if r["zeta"] == zeta]
            assert len(curve) == 11
            assert all(a >= b - 1e-12 for a, b in zip(curve, curve[1:]))

    def test_deterministic_given_seed(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["analyze", "--zeta-grid", "0.4", "--v-grid", "3:4:0.5",
                "--seed", "7", "--mc-cycles", "10000"]
        assert cli.main(args + ["--out", str(a)]) == 0
        assert cli.main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_json_mirrors_csv(self, tmp_path):
        c, j = tmp_path / "t.csv", tmp_path / "t.json"
        args = ["analyze", "--zeta-grid", "0.4", "--v-grid", "3:4:1",
                "--seed", "3", "--mc-cycles", "10000"]
        assert cli.main(args + ["--format", "csv", "--out", str(c)]) == 0
        assert cli.main(args + ["--format", "json", "--out", str(j)]) == 0
        csv_rows = read_csv(c)
        json_rows = json.loads(j.read_text())
        assert len(csv_rows) == len(json_rows)
        for cr, jr in zip(csv_rows, json_rows):
            for col in ("prob_series", "prob_quadrature", "prob_mc"):
                assert float(cr[col]) == jr[col]

    def test_unknown_zeta_is_config_error(self, tmp_path):
        code = cli.main(["analyze", "--zeta-grid", "0.35", "--v-grid",
                         "3:4:1", "--seed", "1",
                         "--out", str(tmp_path / "t.csv")])
        assert code == cli.EXIT_CONFIG


class TestSimulateAndFit:
    def test_round_trip_and_determinism(self, tmp_path, capsys):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        code = cli.main(["simulate", "--duration", "2000", "--seed", "7",
                         "--out", str(out1)])
        assert code == 0
        sim_report = capsys.readouterr().out
        assert cli.main(["simulate", "--duration", "2000", "--seed", "7",
                         "--out", str(out2)]) == 0
        capsys.readouterr()
        assert out1.read_bytes() == out2.read_bytes()

        sim_alpha = float(next(line.split("=")[1] for line
                               in sim_report.splitlines()
                               if line.startswith("alpha")))
        sim_beta = float(next(line.split("=")[1] for line
                              in sim_report.splitlines()
                              if line.startswith("beta")))
        # fitted parameters fall inside the observed range of the
        # measured consensus latencies
        assert 5.0 < sim_alpha < 8.5
        assert 2.0 < sim_beta < 4.8

        assert cli.main(["fit", str(out1), "--key", "0"]) == 0
        fit_report = capsys.readouterr().out
        fit_alpha = float(next(line.split("=")[1] for line
                               in fit_report.splitlines()
                               if line.startswith("alpha")))
        assert fit_alpha == sim_alpha

    def test_under_sample_error(self, tmp_path, capsys):
        code = cli.main(["simulate", "--duration", "5", "--seed", "1",
                         "--out", str(tmp_path / "few.csv")])
        assert code == cli.EXIT_CONFIG

    def test_fit_recovers_synthetic(self, tmp_path, capsys):
        from hlf_aoi.latency import GammaParams, sample_gamma
        draws = sample_gamma(GammaParams(6.57, 3.82), 10**5, seed=31)
        path = tmp_path / "draws.csv"
        path.write_text("\n".join(repr(float(x)) for x in draws) + "\n")
        assert cli.main(["fit", str(path)]) == 0
        report = capsys.readouterr().out
        alpha = float(next(line.split("=")[1] for line in report.splitlines()
                           if line.startswith("alpha")))
        beta = float(next(line.split("=")[1] for line in report.splitlines()
                          if line.startswith("beta")))
        assert alpha == pytest.approx(6.57, rel=0.05)
        assert beta == pytest.approx(3.82, rel=0.05)

    def test_fit_missing_file_is_io_error(self, tmp_path, capsys):
        assert cli.main(["fit", str(tmp_path / "ghost.csv")]) == cli.EXIT_IO

    def test_fit_negative_value_names_line(self, tmp_path, capsys):
        path = tmp_path / "neg.csv"
        path.write_text("1.0\n2.0\n-3.0\n")
        assert cli.main(["fit", str(path)]) == cli.EXIT_CONFIG
        assert "line 3" in capsys.readouterr().err

    def test_fit_constant_file_degenerate(self, tmp_path, capsys):
        path = tmp_path / "const.csv"
        path.write_text("\n".join(["2.5"] * 100) + "\n")
        assert cli.main(["fit", str(path)]) == cli.EXIT_CONFIG


class TestSweep:
    def test_emits_curve_and_argmin(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        assert cli.main(["sweep", "--v", "4", "--out", str(out)]) == 0
        err = capsys.readouterr().err
        assert "zeta_star" in err
        rows = read_csv(out)
        assert [r["zeta"] for r in rows] == \
            ["0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9", "1"]
        assert all(0.0 <= float(r["probability"]) <= 1.0 for r in rows)

    def test_low_contrast_warning(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        assert cli.main(["sweep", "--v", "100", "--zeta-grid",
                         "0.3,0.5,0.7", "--out", str(out)]) == 0
        err = capsys.readouterr().err
        assert "low contrast" in err
        assert all(float(r["probability"]) < 1e-6 for r in read_csv(out))

    def test_single_point_grid(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        assert cli.main(["sweep", "--v", "4", "--zeta-grid", "0.6",
                         "--out", str(out)]) == 0
        assert "zeta_star = 0.6" in capsys.readouterr().err

    def test_csv_round_trip(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        assert cli.main(["sweep", "--v", "4", "--out", str(out)]) == 0
        rows = read_csv(out)
        # reparsing and reformatting reproduces the file byte for byte
        lines = [",".join(cli._SWEEP_HEADER)]
        for r in rows:
            lines.append(",".join([
                format(float(r["zeta"]), ".12g"),
                format(float(r["tx_latency"]), ".12g"),
                format(float(r["probability"]), ".12g"),
                r["method"]]))
        assert out.read_text() == "\n".join(lines) + "\n"


class TestExitCodes:
    def test_distinct(self):
        codes = {cli.EXIT_OK, cli.EXIT_CONFIG, cli.EXIT_NUMERIC, cli.EXIT_IO}
        assert len(codes) == 4
        assert cli.EXIT_OK == 0

    def test_bad_config_path(self, tmp_path, capsys):
        code = cli.main(["sweep", "--v", "4", "--config",
                         str(tmp_path / "none.toml")])
        assert code == cli.EXIT_CONFIG
