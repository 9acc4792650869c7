"""Experiment configs, scenario generation, the Monte-Carlo runner and the CLI."""

import numpy as np
import pytest
import yaml

from onebitbeam import ConfigError, generate_narrowband_scenario, run_experiment, scan_objective
from onebitbeam.cli import main as cli_main
from onebitbeam.harness import (
    NARROWBAND_SCHEMES,
    config_from_mapping,
    default_wideband_n_d,
    load_config,
)

NB_BASE = {
    "scenario": "narrowband-ula",
    "seed": 3,
    "realizations": 2,
    "rx": 8,
    "tx": 2,
    "n_paths": 1,
    "path_snr_db": [-6],
    "n_d": [5],
}

WB_BASE = {
    "scenario": "cdlc-wideband",
    "seed": 4,
    "realizations": 1,
    "rx": [4, 4],
    "tx": 1,
    "pre_snr_db": [-18.0],
    "cdlc": {"n_fft": 64, "min_observed_slots": 32},
}


class TestConfigValidation:
    def test_minimal_narrowband_config(self):
        cfg = config_from_mapping(NB_BASE)
        assert cfg.schemes == NARROWBAND_SCHEMES
        assert cfg.rx.kind == "ula" and cfg.rx.size == 8

    def test_unknown_field_named(self):
        with pytest.raises(ConfigError, match="frobnicate"):
            config_from_mapping({**NB_BASE, "frobnicate": 1})

    def test_snr_list_length_must_match_paths(self):
        with pytest.raises(ConfigError, match="path_snr_db"):
            config_from_mapping({**NB_BASE, "n_paths": 2})

    def test_schedule_entries_positive(self):
        with pytest.raises(ConfigError, match="n_d"):
            config_from_mapping({**NB_BASE, "n_d": [0]})

    def test_scenario_checked(self):
        with pytest.raises(ConfigError, match="scenario"):
            config_from_mapping({**NB_BASE, "scenario": "tdl-a"})

    def test_scheme_scenario_compatibility(self):
        with pytest.raises(ConfigError, match="schemes"):
            config_from_mapping({**NB_BASE, "schemes": ["WOPT"]})

    def test_upa_scenario_needs_planar_rx(self):
        with pytest.raises(ConfigError, match="rx"):
            config_from_mapping({**NB_BASE, "scenario": "narrowband-upa"})

    def test_wideband_defaults(self):
        cfg = config_from_mapping(WB_BASE)
        assert cfg.n_d_schedule == (128,)
        assert cfg.schemes == ("WOPT", "WUNQ", "WQ", "WSTR")
        assert cfg.cdlc_profile.endswith("cdl_c_38901.txt")

    def test_unknown_cdlc_field_named(self):
        with pytest.raises(ConfigError, match="cdlc.bogus"):
            config_from_mapping({**WB_BASE, "cdlc": {"bogus": 2}})


class TestWidebandSchedule:
    @pytest.mark.parametrize(
        "snr,n_d",
        [(-30, 12288), (-27, 4096), (-24, 1024), (-21, 512), (-18, 128), (-15, 64), (-3, 4), (0, 2)],
    )
    def test_anchors_and_halving(self, snr, n_d):
        assert default_wideband_n_d(snr) == n_d

    def test_off_lattice_rejected(self):
        with pytest.raises(ConfigError, match="lattice"):
            default_wideband_n_d(-17.0)

    def test_below_anchor_range_rejected(self):
        with pytest.raises(ConfigError, match="below -30"):
            default_wideband_n_d(-33.0)


class TestScenarioGeneration:
    def test_single_path_snr_scaling_exact(self):
        cfg = config_from_mapping({**NB_BASE, "path_snr_db": [-18]})
        scenario = generate_narrowband_scenario(cfg, np.random.default_rng(0))
        assert np.abs(scenario.zetas[0]) ** 2 == pytest.approx(10 ** (-1.8), rel=1e-9)

    def test_effective_gain_consistent_with_channel(self):
        cfg = config_from_mapping({**NB_BASE, "tx": [2, 2], "path_snr_db": [-10]})
        scenario = generate_narrowband_scenario(cfg, np.random.default_rng(1))
        from onebitbeam import narrowband_channel

        h = narrowband_channel(scenario.path_set, cfg.rx, cfg.tx)
        x = h @ scenario.pilots
        p = scenario.path_set.paths[0]
        v = scenario.zetas[0] * cfg.rx.response(p.aoa_azimuth, p.aoa_elevation)
        np.testing.assert_allclose(x, v, atol=1e-12)

    def test_upa_separations_enforced(self):
        cfg = config_from_mapping(
            {
                **NB_BASE,
                "scenario": "narrowband-upa",
                "rx": [16, 16],
                "tx": [4, 4],
                "n_paths": 3,
                "path_snr_db": [-18, -18, -18],
            }
        )
        sep = 3.56 / 15
        for seed in range(10_000):
            scen = generate_narrowband_scenario(cfg, np.random.default_rng(seed))
            els = np.array([p.aoa_elevation for p in scen.path_set])
            azs = np.array([p.aoa_azimuth for p in scen.path_set])
            for i in range(3):
                for j in range(i + 1, 3):
                    assert abs(els[i] - els[j]) >= sep
                    assert abs(azs[i] - azs[j]) >= sep
            assert np.all(np.abs(els) <= np.pi / 3) and np.all(np.abs(azs) <= np.pi / 3)

    def test_single_path_never_rejects(self):
        cfg = config_from_mapping(NB_BASE)
        scen = generate_narrowband_scenario(cfg, np.random.default_rng(5))
        assert len(scen.path_set) == 1


class TestRunExperiment:
    def test_row_count_and_eta_range(self, tmp_path):
        cfg = config_from_mapping({**NB_BASE, "n_d": [5, 9]})
        rows = run_experiment(cfg, out_path=tmp_path / "out.csv")
        assert len(rows) == 2 * len(cfg.schemes) * 2
        for row in rows:
            assert 0.0 <= row.eta <= 1.0 + 1e-9
            if row.scheme == "IDEAL":
                assert row.eta == 1.0
            assert row.wall_time_s == 0.0

    def test_identical_seed_gives_identical_bytes(self, tmp_path):
        cfg = config_from_mapping({**NB_BASE, "realizations": 1})
        run_experiment(cfg, out_path=tmp_path / "a.csv")
        run_experiment(cfg, out_path=tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_parallel_matches_serial(self, tmp_path):
        cfg = config_from_mapping({**NB_BASE, "realizations": 3})
        run_experiment(cfg, out_path=tmp_path / "serial.csv", parallel=1)
        run_experiment(cfg, out_path=tmp_path / "parallel.csv", parallel=2)
        assert (tmp_path / "serial.csv").read_bytes() == (tmp_path / "parallel.csv").read_bytes()

    def test_seed_override_changes_rows(self, tmp_path):
        cfg = config_from_mapping(NB_BASE)
        run_experiment(cfg, out_path=tmp_path / "a.csv")
        run_experiment(cfg, out_path=tmp_path / "b.csv", seed=99)
        assert (tmp_path / "a.csv").read_bytes() != (tmp_path / "b.csv").read_bytes()

    def test_earlier_realizations_unchanged_when_k_grows(self):
        cfg_small = config_from_mapping({**NB_BASE, "realizations": 1})
        cfg_big = config_from_mapping({**NB_BASE, "realizations": 3})
        rows_small = run_experiment(cfg_small)
        rows_big = run_experiment(cfg_big)
        per_k = len(cfg_small.schemes)
        assert rows_big[:per_k] == rows_small

    def test_wideband_schedule_and_slots(self):
        rows = run_experiment(config_from_mapping(WB_BASE))
        by_scheme = {r.scheme: r for r in rows}
        assert by_scheme["WSTR"].n_d == 128
        assert by_scheme["WQ"].n_d == 128
        assert by_scheme["WOPT"].n_d == 128  # already above min_observed_slots=32
        for r in rows:
            assert r.eta is None and np.isfinite(r.post_snr_db)

    def test_wideband_min_slots_expands_observation(self):
        rows = run_experiment(
            config_from_mapping({**WB_BASE, "cdlc": {"n_fft": 64, "min_observed_slots": 256}, "n_d": [16]})
        )
        by_scheme = {r.scheme: r for r in rows}
        assert by_scheme["WOPT"].n_d == 256
        assert by_scheme["WSTR"].n_d == 16

    def test_missing_profile_reported(self, tmp_path):
        cfg = config_from_mapping(
            {**WB_BASE, "cdlc": {"profile": str(tmp_path / "gone.txt")}}
        )
        with pytest.raises(FileNotFoundError):
            run_experiment(cfg)

    def test_csv_layout(self, tmp_path):
        out = tmp_path / "rows.csv"
        run_experiment(config_from_mapping(NB_BASE), out_path=out)
        lines = out.read_text().splitlines()
        comments = [l for l in lines if l.startswith("#")]
        data = [l for l in lines if not l.startswith("#")]
        assert any("post_snr_db" in c for c in comments)
        assert data[0].split(",")[:5] == ["scenario", "master_seed", "realization", "scheme", "n_d"]
        assert len(data) == 1 + 2 * 3  # header + K * schemes * schedule


class TestScanObjective:
    def test_narrowband_scan_writes_grid(self, tmp_path):
        out = tmp_path / "scan.csv"
        thetas, values = scan_objective(config_from_mapping(NB_BASE), -0.5, 0.5, 0.25, out_path=out)
        assert len(thetas) == 5
        assert np.isfinite(values).all()
        lines = out.read_text().splitlines()
        assert lines[1] == "theta_rad,loglik"
        assert len(lines) == 2 + 5

    def test_grid_validation(self):
        with pytest.raises(ConfigError, match="theta grid"):
            scan_objective(config_from_mapping(NB_BASE), 1.0, -1.0, 0.1)


class TestCli:
    def write_config(self, tmp_path, mapping):
        p = tmp_path / "config.yaml"
        p.write_text(yaml.safe_dump(mapping))
        return p

    def test_run_subcommand(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path, NB_BASE)
        out = tmp_path / "rows.csv"
        assert cli_main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        assert out.exists()
        assert "wrote 6 rows" in capsys.readouterr().out

    def test_run_parallel_and_seed(self, tmp_path):
        cfg = self.write_config(tmp_path, NB_BASE)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        cli_main(["run", "--config", str(cfg), "--out", str(a), "--seed", "7", "--parallel", "2"])
        cli_main(["run", "--config", str(cfg), "--out", str(b), "--seed", "7"])
        assert a.read_bytes() == b.read_bytes()

    def test_scan_objective_subcommand(self, tmp_path):
        cfg = self.write_config(tmp_path, NB_BASE)
        out = tmp_path / "scan.csv"
        code = cli_main(
            ["scan-objective", "--config", str(cfg), "--theta-grid=-0.4:0.4:0.2", "--out", str(out)]
        )
        assert code == 0 and out.exists()

    def test_config_error_exit_code(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path, {**NB_BASE, "scenario": "bogus"})
        assert cli_main(["run", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 2
        assert "scenario" in capsys.readouterr().err

    def test_load_config_roundtrip(self, tmp_path):
        cfg_path = self.write_config(tmp_path, WB_BASE)
        cfg = load_config(cfg_path)
        assert cfg.scenario == "cdlc-wideband"
