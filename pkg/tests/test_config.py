"""
Tests for RunConfig loading, saving and overrides
"""

import json

import pytest
from pydantic import ValidationError

from qcodesign.config import BudgetParameters, ConstraintFlags, RunConfig, SearchSettings
from qcodesign.exceptions import ConfigError
from qcodesign.layout import fully_connected_arch
from qcodesign.scheduling import IdleWindowPolicy


class TestDefaults:
    def test_reference_configuration(self):
        config = RunConfig.create_default()
        assert config.clock.t_qclk == pytest.approx(30e-9)
        assert config.clock.data_lines == 2
        assert config.policy is IdleWindowPolicy.FIRST_TO_LAST_OP
        assert (config.budget.m_unconstrained, config.budget.m_constrained) == (48, 95)
        assert config.layout.direct_lines_per_qubit == 15
        assert config.search.workers >= 1
        assert config.log_level == "WARNING"

    def test_p_grid(self):
        grid = BudgetParameters().p_grid()
        assert len(grid) == 51
        assert grid[0] == pytest.approx(1e-7)
        assert grid[-1] == pytest.approx(1e-2)
        assert list(BudgetParameters(p_points=1).p_grid()) == [pytest.approx(1e-7)]

    def test_constraint_flags(self):
        cs = ConstraintFlags(park_crosstalk=False).to_constraint_set(fully_connected_arch(2))
        assert cs.block_same_protocol and cs.one_measurement_per_block
        assert not cs.park_crosstalk

    def test_search_budget_scales_with_workers(self):
        assert SearchSettings(workers=1).resolved_budget_nodes == 2_000_000
        assert SearchSettings(workers=3).resolved_budget_nodes == 6_000_000
        assert SearchSettings(workers=16).resolved_budget_nodes == 10_000_000
        assert SearchSettings(budget_nodes=5, workers=16).resolved_budget_nodes == 5

    def test_invalid_idle_rate(self):
        with pytest.raises(ValidationError):
            BudgetParameters(q_list=[2.0])


class TestFiles:
    def test_yaml_round_trip(self, tmp_path):
        config = RunConfig.create_default().with_overrides(policy="makespan")
        loaded = RunConfig.load(config.save(tmp_path / "run.yaml"))
        assert loaded == config

    def test_json_round_trip(self, tmp_path):
        config = RunConfig.create_default()
        path = config.save(tmp_path / "run.json")
        assert json.loads(path.read_text())["clock"]["word_bits"] == 45
        assert RunConfig.load(path) == config

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            RunConfig.load(tmp_path / "nope.yaml")

    def test_unsupported_format(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text("x = 1")
        with pytest.raises(ConfigError, match="Unsupported"):
            RunConfig.load(path)
        with pytest.raises(ConfigError):
            RunConfig.create_default().save(path)

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("clock: [unclosed")
        with pytest.raises(ConfigError, match="Invalid YAML"):
            RunConfig.load(path)

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("schedule_everything: true\n")
        with pytest.raises(ConfigError):
            RunConfig.load(path)

    def test_empty_file_gives_defaults(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("")
        assert RunConfig.load(path) == RunConfig.create_default()

    def test_env_expansion(self, tmp_path, monkeypatch):
        monkeypatch.setenv("QCODESIGN_OUT", str(tmp_path / "results"))
        path = tmp_path / "run.yaml"
        path.write_text("output_dir: ${QCODESIGN_OUT}\nlog_level: ${QCODESIGN_UNSET_LEVEL_VAR}\n")
        with pytest.raises(ConfigError, match="unknown log level"):
            RunConfig.load(path)
        path.write_text("output_dir: ${QCODESIGN_OUT}\nlog_level: info\n")
        config = RunConfig.load(path)
        assert config.output_dir == str(tmp_path / "results")
        assert config.log_level == "INFO"


class TestOverrides:
    def test_dotted_keys(self):
        config = RunConfig.create_default().with_overrides(
            **{"clock.t_qclk": 45e-9, "search.budget_nodes": 10, "search.workers": None}
        )
        assert config.clock.t_qclk == pytest.approx(45e-9)
        assert config.search.budget_nodes == 10

    def test_policy_string(self):
        assert RunConfig.create_default().with_overrides(policy="makespan").policy is IdleWindowPolicy.FULL_MAKESPAN

    def test_invalid_value(self):
        with pytest.raises(ConfigError):
            RunConfig.create_default().with_overrides(**{"clock.data_lines": 0})

    def test_clock_order(self):
        with pytest.raises(ConfigError):
            RunConfig.create_default().with_overrides(**{"clock.t_qclk": 0.5e-9})

    def test_missing_circuit_file(self, tmp_path):
        with pytest.raises(ConfigError, match="file not found"):
            RunConfig.create_default().with_overrides(circuit=str(tmp_path / "c.json"))
