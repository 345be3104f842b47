"""Command-line behaviour: defaults in help, exit codes, config precedence,
machine-readable output, and figure artefacts."""

import json

import pytest

import risrelay.cli as cli
from risrelay import SweepError


def run_cli(args):
    return cli.main(args)


class TestHelp:
    def test_defaults_shown_in_help(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run_cli(["eval", "--help"])
        assert exc.value.code == 0
        text = capsys.readouterr().out
        for token in ("28", "1.5", "45", "60", "114", "0.5", "10"):
            assert f"default: {token}" in text

    def test_unknown_figure_exits_with_usage_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run_cli(["figure", "fig9"])
        assert exc.value.code == 2


class TestEval:
    def test_text_report_lists_all_schemes(self, capsys):
        assert run_cli(["eval", "--distance-m", "25"]) == 0
        out = capsys.readouterr().out
        for scheme in ("HD-DF", "FD-DF", "IdealFD-DF", "RIS-anomalous-exact",
                       "RIS-mirror-asymptote", "RIS-diffuser-asymptote", "RIS-lens"):
            assert scheme in out
        assert "zone" in out

    def test_records_format(self, capsys):
        assert run_cli(["eval", "--distance-m", "1", "--format", "records"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        records = [json.loads(line) for line in lines]
        assert len(records) == 7
        hd = next(r for r in records if r["scheme"] == "HD-DF")
        # half the power on the calibration hop: 114 dB - 3.01 dB
        assert hd["snr_db"] == pytest.approx(110.9897, abs=1e-3)

    def test_validation_error_names_field(self, capsys):
        assert run_cli(["eval", "--distance-m", "0"]) == 2
        err = capsys.readouterr().err
        assert "d_sr" in err or "distance" in err

    def test_scheme_subset(self, capsys):
        assert run_cli(["eval", "--schemes", "HD-DF,RIS-lens", "--format", "records"]) == 0
        records = [json.loads(l) for l in capsys.readouterr().out.strip().splitlines()]
        assert [r["scheme"] for r in records] == ["HD-DF", "RIS-lens"]

    def test_unknown_scheme_rejected(self, capsys):
        assert run_cli(["eval", "--schemes", "XYZ"]) == 2


class TestFigure:
    def test_fig3_writes_csv_manifest_and_summary(self, tmp_path, capsys):
        out = tmp_path / "fig3.csv"
        assert run_cli(["figure", "fig3", "--grid-points", "60",
                        "--output", str(out)]) == 0
        text = capsys.readouterr().out
        assert "crossover" in text
        assert "regimes" in text
        csv_lines = out.read_text().splitlines()
        header = [l for l in csv_lines if not l.startswith("#")][0]
        assert header.split(",") == ["swept_variable", "HD-DF", "FD-DF", "IdealFD-DF",
                                     "RIS-anomalous-exact", "RIS-mirror-asymptote",
                                     "RIS-diffuser-asymptote", "RIS-lens"]
        manifest = json.loads((tmp_path / "fig3.csv.manifest.json").read_text())
        assert manifest["sweep_kind"] == "Distance"

    def test_repeat_runs_identical_data_sections(self, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            assert run_cli(["figure", "fig3", "--grid-points", "40",
                            "--output", str(path)]) == 0
        capsys.readouterr()
        sections = [
            [l for l in p.read_text().splitlines() if not l.startswith("#")]
            for p in paths
        ]
        assert sections[0] == sections[1]

    def test_output_dir_env_var(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("RISRELAY_OUTPUT_DIR", str(tmp_path))
        assert run_cli(["figure", "fig4-indoor", "--grid-points", "24"]) == 0
        capsys.readouterr()
        assert (tmp_path / "fig4-indoor.csv").exists()

    def test_swept_axis_flag_conflict(self, tmp_path, capsys):
        assert run_cli(["figure", "fig3", "--distance-m", "50",
                        "--output", str(tmp_path / "x.csv")]) == 2
        assert "conflicts" in capsys.readouterr().err

    def test_numerical_failure_exit_code(self, tmp_path, capsys, monkeypatch):
        def boom(spec, workers=1):
            raise SweepError(1.0, "RIS-anomalous-exact", RuntimeError("no convergence"), [])

        monkeypatch.setattr(cli, "run_sweep", boom)
        assert run_cli(["figure", "fig3", "--grid-points", "24",
                        "--output", str(tmp_path / "x.csv")]) == 3
        assert "numerical failure" in capsys.readouterr().err


class TestConfigPrecedence:
    def test_file_overrides_defaults_flags_override_file(self, tmp_path, capsys):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"distance_m": 50.0, "frequency_ghz": 60.0}))
        assert run_cli(["eval", "--config", str(config), "--distance-m", "25",
                        "--format", "records"]) == 0
        records = [json.loads(l) for l in capsys.readouterr().out.strip().splitlines()]
        hd = next(r for r in records if r["scheme"] == "HD-DF")
        # distance 25 m from the flag (file would say 50): SNR = 114 - 3.01 - 10 log10(25)
        assert hd["snr_db"] == pytest.approx(114 - 3.0103 - 10 * 1.39794, abs=1e-3)

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"bogus": 1}))
        assert run_cli(["eval", "--config", str(config)]) == 2
