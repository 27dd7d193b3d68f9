from stores.experiments.ExperimentConfig import ExperimentConfig
from stores.experiments.suite import aliasing_config, ringworld_suite, suite_schedules
from stores.mdp.MDPEnums import FeatureMode, Regime
from stores.schedules.LambdaSchedule import AdapterFeatures, ScheduleKind


def test_schedule_list():
    schedules = suite_schedules()
    kinds = [schedule.kind for schedule in schedules]
    assert len(schedules) == 15
    assert kinds.count(ScheduleKind.FIXED) == 11
    assert kinds.count(ScheduleKind.DECAY) == 2
    assert [s.value for s in schedules if s.kind is ScheduleKind.FIXED][-1] == 1.0


def test_suite_covers_every_config_and_schedule():
    configs = ringworld_suite()
    assert len(configs) == 5 * 15
    assert len({config.label for config in configs}) == len(configs)
    for config in configs:
        ExperimentConfig.model_validate(config.model_dump(mode="json"))


def test_suite_regimes():
    configs = ringworld_suite(n_runs=3)
    on_policy = [c for c in configs if c.regime is Regime.ON_POLICY]
    off_policy = [c for c in configs if c.regime is Regime.OFF_POLICY]
    assert {c.chain_length for c in on_policy} == {10, 25, 50}
    assert all(c.gamma_const == 0.99 for c in on_policy)
    assert {c.behavior_right for c in off_policy} == {0.85, 0.75}
    assert all(c.chain_length == 10 and c.gamma_const == 0.95 for c in off_policy)
    assert all(c.n_runs == 3 for c in configs)


def test_suite_size_filter():
    assert len(ringworld_suite(sizes=(10,), regimes=(Regime.ON_POLICY,))) == 15


def test_aliasing_config():
    config = aliasing_config()
    assert config.feature_mode is FeatureMode.ALIASED
    assert config.alias_pairs == [(3, 8)]
    assert config.steps == 5000
    assert config.gamma_const == 0.95
    assert config.schedule.kind is ScheduleKind.GREEDY
    assert config.adapter_features is AdapterFeatures.TABULAR

    assert aliasing_config(chain_length=12, n_runs=4).alias_pairs == [(3, 10)]
