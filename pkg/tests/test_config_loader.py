import pytest

from helpers.errors import ConfigError
from stores.experiments.ExperimentConfig import ExperimentConfig
from stores.experiments.config_loader import apply_overrides, load_config, parse_config
from stores.learners.LearnerEnums import TraceKind
from stores.mdp.MDPEnums import Regime
from stores.schedules.LambdaSchedule import AdapterFeatures, ScheduleKind

VALID = """{
    "chain_length": 10,
    "regime": "off_policy",
    "behavior_right": 0.75,
    "gamma_const": 0.95,
    "schedule": {"kind": "fixed", "value": 0.4}
}
"""


def test_parse_valid_config():
    config = parse_config(VALID)
    assert config.regime is Regime.OFF_POLICY
    assert config.schedule.kind is ScheduleKind.FIXED
    assert config.schedule.value == 0.4


def test_load_from_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(VALID)
    assert load_config(path) == parse_config(VALID)


def test_syntax_error_reports_line():
    text = '{\n    "chain_length": 10,\n    "alpha": ,\n}\n'
    with pytest.raises(ConfigError) as info:
        parse_config(text, "bad.json")
    assert info.value.line == 3
    assert str(info.value).startswith("bad.json:3:")


def test_invalid_value_reports_field_and_line():
    text = '{\n    "alpha": 0.1,\n    "chain_length": 3\n}\n'
    with pytest.raises(ConfigError) as info:
        parse_config(text, "small.json")
    assert info.value.line == 3
    assert "chain_length" in str(info.value)


def test_on_policy_with_different_behaviour_is_rejected():
    with pytest.raises(ConfigError):
        parse_config('{"regime": "on_policy", "behavior_right": 0.5}')


def test_non_object_is_rejected():
    with pytest.raises(ConfigError):
        parse_config("[1, 2, 3]")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.json")


def test_overrides_revalidate():
    config = ExperimentConfig()
    assert apply_overrides(config, alpha=0.5, n_runs=None).alpha == 0.5
    assert apply_overrides(config) is config
    with pytest.raises(ConfigError):
        apply_overrides(config, alpha=-1.0)


def test_greedy_schedule_needs_discounting():
    text = '{\n    "gamma_const": 1.0,\n    "schedule": {"kind": "greedy"}\n}\n'
    with pytest.raises(ConfigError) as info:
        parse_config(text, "undiscounted.json")
    assert "gamma_const < 1" in str(info.value)
    assert parse_config('{"gamma_const": 1.0, "schedule": {"kind": "fixed", "value": 1.0}}').gamma_const == 1.0


def test_adapter_options_parse():
    config = parse_config('{"adapter_trace": "accumulating", "adapter_features": "tabular"}')
    assert config.adapter_trace is TraceKind.ACCUMULATING
    assert config.adapter_features is AdapterFeatures.TABULAR
    assert ExperimentConfig().adapter_trace is TraceKind.DUTCH
