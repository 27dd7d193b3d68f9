from enum import Enum

from pydantic import BaseModel, Field, model_validator

from stores.learners.LearnerEnums import TraceKind
from stores.mdp.MDPEnums import FeatureMode, Regime
from stores.mdp.features import aliased_features
from stores.mdp.ringworld import MIN_RING_SIZE, TARGET_RIGHT_PROB
from stores.schedules.LambdaSchedule import AdapterFeatures, LambdaSchedule, OffPolicyInit, ScheduleKind

STEPS_PER_STATE = 100


class ErrorMetric(Enum):
    MEAN_ABS = "mean_abs"
    MSVE_D_WEIGHTED = "msve_d_weighted"


class SweepCriterion(Enum):
    AREA = "area"
    FINAL = "final"


class FirstLambda(Enum):
    # on-policy 1, off-policy from the adapter's initial weights
    REGIME = "regime"
    ONE = "one"


class ExperimentConfig(BaseModel):
    chain_length: int = Field(default=10, ge=MIN_RING_SIZE)
    regime: Regime = Regime.ON_POLICY
    target_right: float = Field(default=TARGET_RIGHT_PROB, gt=0.0, lt=1.0)
    behavior_right: float = Field(default=TARGET_RIGHT_PROB, gt=0.0, lt=1.0)
    gamma_const: float = Field(default=0.99, ge=0.0, le=1.0)
    schedule: LambdaSchedule = Field(default_factory=LambdaSchedule.greedy)
    alpha: float = Field(default=0.1, ge=0.0)
    eta: float = Field(default=1.0, gt=0.0)
    alpha_bar: float | None = Field(default=None, ge=0.0)
    feature_mode: FeatureMode = FeatureMode.TABULAR
    alias_pairs: list[tuple[int, int]] = Field(default_factory=list)
    n_steps: int | None = Field(default=None, ge=1)
    n_runs: int = Field(default=100, ge=1)
    base_seed: int = 0
    error_metric: ErrorMetric = ErrorMetric.MEAN_ABS
    sweep_criterion: SweepCriterion = SweepCriterion.AREA
    first_lambda: FirstLambda = FirstLambda.REGIME
    off_policy_init: OffPolicyInit = OffPolicyInit.SQUARED
    r_max: float = Field(default=1.0, gt=0.0)
    reset_trace_on_teleport: bool = False
    adapter_trace: TraceKind = TraceKind.DUTCH
    adapter_features: AdapterFeatures = AdapterFeatures.SHARED

    @model_validator(mode="after")
    def check_consistency(self):
        if self.regime is Regime.ON_POLICY and self.behavior_right != self.target_right:
            raise ValueError("on-policy configs need behavior_right == target_right")
        if self.schedule.kind is ScheduleKind.GREEDY and self.gamma_const >= 1.0:
            # the adapter's initial weights scale with r_max / (1 - gamma_const)
            raise ValueError("greedy schedule needs gamma_const < 1")
        if self.feature_mode is FeatureMode.ALIASED:
            if not self.alias_pairs:
                raise ValueError("aliased features need at least one alias pair")
            aliased_features(self.chain_length, self.alias_pairs)
        elif self.alias_pairs:
            raise ValueError("alias_pairs given but feature_mode is tabular")
        return self

    @property
    def steps(self) -> int:
        return self.n_steps if self.n_steps is not None else self.chain_length * STEPS_PER_STATE

    @property
    def alpha_h(self) -> float:
        return self.alpha * self.eta

    @property
    def adapter_alpha(self) -> float:
        return self.alpha if self.alpha_bar is None else self.alpha_bar

    @property
    def label(self) -> str:
        parts = [f"ring{self.chain_length}", self.regime.value]
        if self.regime is Regime.OFF_POLICY:
            parts.append(f"mu{self.behavior_right:g}")
        if self.feature_mode is FeatureMode.ALIASED:
            parts.append("aliased")
        parts.append(self.schedule.label)
        return "_".join(parts)
