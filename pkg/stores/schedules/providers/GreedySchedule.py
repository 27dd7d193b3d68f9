from helpers.errors import MissingContextError
from stores.mdp.MDPEnums import Regime
from stores.mdp.MDPModel import FeatureMap
from stores.schedules.LambdaGreedy import (
    LambdaGreedyState,
    initial_lambda,
    lambda_greedy_step,
    state_lambda,
)

from ..ScheduleInterface import ScheduleInterface


class GreedySchedule(ScheduleInterface):
    def __init__(
        self,
        state: LambdaGreedyState,
        regime: Regime,
        features: FeatureMap,
        adapter_features: FeatureMap | None = None,
    ):
        self.state = state
        self.regime = regime
        self.features = features
        self.adapter_features = adapter_features

    def _adapter_x(self, s):
        return None if self.adapter_features is None else self.adapter_features(s)

    def first_lambda(self, s0, w_main) -> float:
        return initial_lambda(self.state, w_main, self.features(s0), self.regime, self._adapter_x(s0))

    def next_lambda(self, t, s_next, context=None) -> float:
        if context is None:
            raise MissingContextError("greedy schedule needs the transition context")
        adapter_x_t = adapter_x_next = None
        if self.adapter_features is not None:
            if context.s_t is None:
                raise MissingContextError("adapter features need s_t in the transition context")
            adapter_x_t, adapter_x_next = self.adapter_features(context.s_t), self.adapter_features(s_next)
        self.state, lam = lambda_greedy_step(
            self.state,
            context.w_main,
            context.x_t,
            context.x_next,
            context.reward,
            context.rho_t,
            context.gamma_t,
            context.gamma_next,
            adapter_x_t=adapter_x_t,
            adapter_x_next=adapter_x_next,
        )
        return lam

    def state_lambda(self, t, s, w_main) -> float:
        return state_lambda(self.state, w_main, self.features(s), self._adapter_x(s))
