from helpers.errors import MissingContextError
from stores.learners.LearnerEnums import TraceKind
from stores.mdp.MDPEnums import Regime
from stores.mdp.MDPModel import FeatureMap
from stores.schedules.LambdaGreedy import init_lambda_greedy
from stores.schedules.LambdaSchedule import LambdaSchedule, OffPolicyInit, ScheduleKind
from stores.schedules.ScheduleInterface import ScheduleInterface
from stores.schedules.StepContext import StepContext
from stores.schedules.providers import DecaySchedule, FixedSchedule, GreedySchedule, OracleSchedule
from stores.solvers.exact_solver import ExactMoments


class ScheduleFactory:
    def __init__(
        self,
        features: FeatureMap,
        regime: Regime = Regime.ON_POLICY,
        gamma_const: float = 0.99,
        r_max: float = 1.0,
        alpha: float = 0.1,
        off_policy_init: OffPolicyInit = OffPolicyInit.SQUARED,
        exact: ExactMoments | None = None,
        adapter_features: FeatureMap | None = None,
        trace: TraceKind = TraceKind.DUTCH,
    ):
        self.features = features
        self.regime = regime
        self.gamma_const = gamma_const
        self.r_max = r_max
        self.alpha = alpha
        self.off_policy_init = off_policy_init
        self.exact = exact
        self.adapter_features = adapter_features
        self.trace = trace

    def create(self, schedule: LambdaSchedule) -> ScheduleInterface:
        if schedule.kind is ScheduleKind.FIXED:
            return FixedSchedule(schedule.value)

        if schedule.kind is ScheduleKind.DECAY:
            return DecaySchedule(schedule.k)

        if schedule.kind is ScheduleKind.GREEDY:
            adapter = self.adapter_features if self.adapter_features is not None else self.features
            state = init_lambda_greedy(
                adapter.n_features,
                self.regime,
                self.gamma_const,
                self.r_max,
                off_policy_init=self.off_policy_init,
                alpha=self.alpha,
                trace=self.trace,
            )
            return GreedySchedule(state, self.regime, self.features, self.adapter_features)

        if self.exact is None:
            raise MissingContextError("oracle schedule needs exact moments")
        return OracleSchedule(self.exact, self.features)


def schedule_lambda(
    schedule: LambdaSchedule | ScheduleInterface,
    t: int,
    s_next: int,
    context: StepContext | None = None,
) -> float:
    """
    lambda for the successor state at step t. Fixed and decay schedules work
    from their description alone; adaptive ones need a provider from
    ScheduleFactory plus the transition context.
    """
    if isinstance(schedule, ScheduleInterface):
        return schedule.next_lambda(t, s_next, context)

    if schedule.kind is ScheduleKind.FIXED:
        return FixedSchedule(schedule.value).next_lambda(t, s_next)
    if schedule.kind is ScheduleKind.DECAY:
        return DecaySchedule(schedule.k).next_lambda(t, s_next)
    raise MissingContextError(f"{schedule.kind.value} schedule needs its adapter state; build it with ScheduleFactory")
