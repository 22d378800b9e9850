import json
import math

import numpy as np
import pytest  # noqa: F401

from dfscontrol import cli, experiments
from dfscontrol.errors import ConfigError, UnknownFigureError


def write_config(tmp_path, payload, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


SMALL_RUN = {
    "n_atoms": 4,
    "k": 0,
    "scheme": "linear",
    "t_f": 2.0,
    "outputs": ["trajectory", "summary"],
}


class TestConfigParsing:
    def test_token_resolution(self):
        run = experiments.parse_run_config(
            {"n_atoms": 10, "k": "half", "scheme": "quench", "t_f": 40.0, "q": "sqrtN"}
        )
        assert run.k == 5
        assert run.q == pytest.approx(math.sqrt(10.0))

    def test_half_requires_even_n(self):
        with pytest.raises(ConfigError) as err:
            experiments.parse_run_config(
                {"n_atoms": 5, "k": "half", "scheme": "linear", "t_f": 1.0}
            )
        assert "k" in err.value.field_errors

    def test_collects_multiple_field_errors(self):
        with pytest.raises(ConfigError) as err:
            experiments.parse_run_config(
                {"n_atoms": 0, "scheme": "nope", "t_f": -1.0, "frob": 3}
            )
        assert {"n_atoms", "scheme", "t_f", "frob"} <= set(err.value.field_errors)

    def test_degenerate_horizon_rejected(self):
        with pytest.raises(ConfigError):
            experiments.parse_run_config({"n_atoms": 4, "scheme": "linear", "t_f": 0})

    def test_q_only_for_quench(self):
        with pytest.raises(ConfigError):
            experiments.parse_run_config(
                {"n_atoms": 4, "scheme": "linear", "t_f": 1.0, "q": 2.0}
            )

    def test_sweep_expansion_cartesian(self):
        raw = {
            "n_atoms": 4,
            "scheme": "linear",
            "t_f": 1.0,
            "sweep": [
                {"field": "t_f", "values": [1.0, 2.0]},
                {"field": "n_atoms", "values": [4, 6]},
            ],
        }
        expanded = experiments.expand_sweep(raw)
        assert [(d["t_f"], d["n_atoms"]) for d in expanded] == [
            (1.0, 4), (1.0, 6), (2.0, 4), (2.0, 6),
        ]

    def test_sweep_shape_validated(self):
        with pytest.raises(ConfigError):
            experiments.expand_sweep({"sweep": [{"field": "t_f"}]})


class TestRunOutputs:
    def test_trajectory_csv_format(self, tmp_path):
        run = experiments.parse_run_config(SMALL_RUN)
        summary = experiments.run_simulation(run, tmp_path)
        csv_path = tmp_path / summary["files"]["trajectory"]
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "t,mu,chi,purity,fidelity,xi_k,Xi_k"
        first = lines[1].split(",")
        assert float(first[0]) == 0.0
        assert first[5] == "" and first[6] == ""  # adiabaticity not requested
        assert len(lines) >= 10

    def test_summary_round_trips(self, tmp_path):
        run = experiments.parse_run_config(SMALL_RUN)
        summary = experiments.run_simulation(run, tmp_path)
        on_disk = json.loads((tmp_path / f"{summary['label']}_summary.json").read_text())
        assert on_disk["config"]["n_atoms"] == 4
        assert (tmp_path / on_disk["files"]["trajectory"]).exists()
        assert 0.0 <= on_disk["final_fidelity"] <= 1.0
        assert on_disk["dt_used"] > 0.0

    def test_deterministic_bytes(self, tmp_path):
        run = experiments.parse_run_config(SMALL_RUN)
        a = experiments.run_simulation(run, tmp_path / "a")
        b = experiments.run_simulation(run, tmp_path / "b")
        csv_a = (tmp_path / "a" / a["files"]["trajectory"]).read_bytes()
        csv_b = (tmp_path / "b" / b["files"]["trajectory"]).read_bytes()
        assert csv_a == csv_b

    def test_adiabaticity_columns_filled_when_requested(self, tmp_path):
        run = experiments.parse_run_config(
            {"n_atoms": 4, "k": 2, "scheme": "quench", "t_f": 1.0, "q": 1.0,
             "outputs": ["trajectory", "adiabaticity", "summary"]}
        )
        summary = experiments.run_simulation(run, tmp_path)
        lines = (tmp_path / summary["files"]["trajectory"]).read_text().splitlines()
        cells = lines[1].split(",")
        assert cells[5] != "" and cells[6] != ""

    def test_bloch_map_output(self, tmp_path):
        run = experiments.parse_run_config(
            {"n_atoms": 3, "scheme": "linear", "t_f": 0.5,
             "outputs": ["summary", "bloch_map"],
             "bloch_theta_steps": 7, "bloch_phi_steps": 8}
        )
        summary = experiments.run_simulation(run, tmp_path)
        lines = (tmp_path / summary["files"]["bloch_map"]).read_text().splitlines()
        assert lines[0] == "theta,phi,overlap"
        assert len(lines) == 1 + 7 * 8
        # Husimi values are populations: within [0, 1]
        vals = [float(line.split(",")[2]) for line in lines[1:]]
        assert all(-1e-12 <= v <= 1.0 + 1e-12 for v in vals)

    def test_scan_csv(self, tmp_path):
        summary = experiments.run_adiabaticity_scan(
            {"n_atoms": 6, "k": 0, "mu_values": [0.2, 0.5, 1.0]}, tmp_path
        )
        lines = (tmp_path / summary["files"]["scan"]).read_text().splitlines()
        assert lines[0] == "mu,xi,xi_over_xif,branch"
        last = lines[-1].split(",")
        assert float(last[2]) == pytest.approx(1.0, rel=1e-8)
        assert last[3] == "1"

    def test_scan_empty_grid_is_config_error(self, tmp_path):
        with pytest.raises(ConfigError):
            experiments.run_adiabaticity_scan(
                {"n_atoms": 6, "k": 0, "mu_values": []}, tmp_path
            )

    def test_qscan_csv_and_summary(self, tmp_path):
        summary = experiments.run_optimize_q(
            {"n_atoms": 6, "k": 0, "t_f": 2.0,
             "q_over_n_values": [0.2, 0.4], "dt": 2e-3},
            tmp_path,
        )
        lines = (tmp_path / summary["files"]["qscan"]).read_text().splitlines()
        assert lines[0] == "q,q_over_N,final_fidelity"
        assert len(lines) == 3
        assert min(abs(summary["q_best"] - v) for v in (1.2, 2.4)) < 1e-12
        assert summary["failed_points"] == []


class TestFigureBundles:
    def test_unknown_figure(self):
        with pytest.raises(UnknownFigureError):
            experiments.figure_tasks(9)

    def test_known_ids_have_tasks(self):
        for fid in experiments.FIGURE_IDS:
            tasks = experiments.figure_tasks(fid)
            assert any(tasks.values())

    def test_figure3_bundle_runs(self, tmp_path):
        # shrink the grid for speed; same code path as the full bundle
        tasks = experiments.figure_tasks(3)["bloch"]
        raw = {**tasks[0], "theta_steps": 9, "phi_steps": 8}
        summary = experiments.run_bloch_map(raw, tmp_path)
        assert (tmp_path / summary["files"]["bloch_map"]).exists()

    def test_figure5_and_7_respect_quench_preconditions(self):
        for raw in experiments.figure_tasks(7)["runs"]:
            experiments.parse_run_config(raw)  # must not raise
        for raw in experiments.figure_tasks(5)["runs"]:
            run = experiments.parse_run_config(raw)
            if run.k not in (0,):
                assert run.n_atoms % 2 == 0


class TestCliProcess:
    def test_simulate_roundtrip(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SMALL_RUN)
        code = cli.main(["simulate", "--config", cfg, "--output-dir", str(tmp_path / "out")])
        assert code == 0
        out = capsys.readouterr().out
        assert "F=" in out
        assert (tmp_path / "out" / "N4_k0_linear_tf2_trajectory.csv").exists()

    def test_invalid_config_exit_code(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"n_atoms": -1, "scheme": "linear", "t_f": 1.0})
        assert cli.main(["simulate", "--config", cfg]) == cli.EXIT_CONFIG
        assert "config error" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        missing = str(tmp_path / "nope.json")
        assert cli.main(["simulate", "--config", missing]) == cli.EXIT_CONFIG

    def test_unknown_figure_exit_code(self, tmp_path, capsys):
        code = cli.main(["reproduce-figure", "--figure", "9",
                         "--output-dir", str(tmp_path)])
        assert code == cli.EXIT_UNKNOWN_FIGURE

    def test_integration_failure_exit_code(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {**SMALL_RUN, "n_atoms": 20, "dt": 0.05,
                                      "t_f": 40.0})
        code = cli.main(["simulate", "--config", cfg, "--output-dir", str(tmp_path)])
        assert code == cli.EXIT_INTEGRATION

    def test_dt_flag_overrides(self, tmp_path):
        cfg = write_config(tmp_path, SMALL_RUN)
        out = tmp_path / "out"
        assert cli.main(["simulate", "--config", cfg, "--output-dir", str(out),
                         "--dt", "0.002"]) == 0
        summary = json.loads((out / "N4_k0_linear_tf2_summary.json").read_text())
        assert summary["dt_used"] == pytest.approx(0.002)

    def test_env_var_default_output(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv(experiments.OUTPUT_DIR_ENV, str(tmp_path / "envout"))
        cfg = write_config(tmp_path, SMALL_RUN)
        assert cli.main(["simulate", "--config", cfg]) == 0
        assert (tmp_path / "envout" / "N4_k0_linear_tf2_summary.json").exists()

    def test_bloch_map_command(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {"n_atoms": 6, "k": 3, "mu": 1.0, "theta_steps": 9, "phi_steps": 8},
        )
        out = tmp_path / "out"
        assert cli.main(["bloch-map", "--config", cfg, "--output-dir", str(out)]) == 0
        grid = np.array([
            [float(c) for c in line.split(",")]
            for line in (out / "N6_k3_mu1_bloch.csv").read_text().splitlines()[1:]
        ])
        # ring state: suppressed at (pi/2, 0)
        equator_x = grid[(np.isclose(grid[:, 0], math.pi / 2.0)) & (grid[:, 1] == 0.0)]
        assert equator_x[0, 2] <= 1e-6

    def test_adiabaticity_scan_command(self, tmp_path):
        cfg = write_config(
            tmp_path, {"n_atoms": 1, "k": 0, "mu_values": [1e-6, 0.5, 1.0]}
        )
        out = tmp_path / "out"
        assert cli.main(["adiabaticity-scan", "--config", cfg,
                         "--output-dir", str(out)]) == 0
        lines = (out / "N1_k0_xi_scan.csv").read_text().splitlines()
        # single-atom curve: xi = 8 at mu -> 0, xi = 1 at mu = 1
        first = lines[1].split(",")
        assert float(first[1]) == pytest.approx(8.0, abs=1e-5)
        assert float(lines[-1].split(",")[1]) == pytest.approx(1.0, rel=1e-10)

    def test_optimize_q_command(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {"n_atoms": 4, "k": 0, "t_f": 2.0, "q_over_n_values": [0.3, 0.5],
             "dt": 2e-3},
        )
        out = tmp_path / "out"
        assert cli.main(["optimize-q", "--config", cfg, "--output-dir", str(out),
                         "--jobs", "2"]) == 0
        assert (out / "N4_k0_qscan.csv").exists()
