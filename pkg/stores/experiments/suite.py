from stores.experiments.ExperimentConfig import ExperimentConfig
from stores.mdp.MDPEnums import FeatureMode, Regime
from stores.schedules.LambdaSchedule import AdapterFeatures, LambdaSchedule

ON_POLICY_GAMMA = 0.99
OFF_POLICY_GAMMA = 0.95
OFF_POLICY_SIZE = 10
OFF_POLICY_BEHAVIORS = (0.85, 0.75)
FIXED_LAMBDAS = tuple(round(0.1 * i, 1) for i in range(11))
DECAY_CONSTANTS = (10.0, 100.0)

ALIASING_SIZE = 10
ALIASING_GAMMA = 0.95
ALIASING_STEPS = 5000


def suite_schedules() -> list[LambdaSchedule]:
    schedules = [LambdaSchedule.greedy(), LambdaSchedule.oracle()]
    schedules += [LambdaSchedule.fixed(value) for value in FIXED_LAMBDAS]
    schedules += [LambdaSchedule.decay(k) for k in DECAY_CONSTANTS]
    return schedules


def base_configs(
    sizes: tuple[int, ...] = (10, 25, 50),
    regimes: tuple[Regime, ...] = (Regime.ON_POLICY, Regime.OFF_POLICY),
    **common,
) -> list[ExperimentConfig]:
    configs = []
    if Regime.ON_POLICY in regimes:
        for n in sizes:
            configs.append(ExperimentConfig(chain_length=n, gamma_const=ON_POLICY_GAMMA, **common))
    if Regime.OFF_POLICY in regimes:
        for mu in OFF_POLICY_BEHAVIORS:
            configs.append(
                ExperimentConfig(
                    chain_length=OFF_POLICY_SIZE,
                    regime=Regime.OFF_POLICY,
                    behavior_right=mu,
                    gamma_const=OFF_POLICY_GAMMA,
                    **common,
                )
            )
    return configs


def ringworld_suite(
    sizes: tuple[int, ...] = (10, 25, 50),
    regimes: tuple[Regime, ...] = (Regime.ON_POLICY, Regime.OFF_POLICY),
    **common,
) -> list[ExperimentConfig]:
    """
    On-policy chains of every size plus the two off-policy behaviours on the
    length-10 chain, each crossed with every lambda schedule.
    `common` sets shared fields such as base_seed, n_runs or alpha.
    """
    return [
        base.model_copy(update={"schedule": schedule})
        for base in base_configs(sizes, regimes, **common)
        for schedule in suite_schedules()
    ]


def aliasing_config(**overrides) -> ExperimentConfig:
    """Greedy lambda on a chain where state 3 shares the last non-terminal state's feature."""
    n = overrides.get("chain_length", ALIASING_SIZE)
    fields = dict(
        chain_length=n,
        gamma_const=ALIASING_GAMMA,
        n_steps=ALIASING_STEPS,
        feature_mode=FeatureMode.ALIASED,
        alias_pairs=[(3, n - 2)],
        schedule=LambdaSchedule.greedy(),
        # the adapter needs its own per-state weights to see the aliasing bias
        adapter_features=AdapterFeatures.TABULAR,
    )
    fields.update(overrides)
    return ExperimentConfig(**fields)
