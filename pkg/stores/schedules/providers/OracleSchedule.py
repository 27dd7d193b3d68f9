from helpers.errors import MissingContextError
from stores.mdp.MDPModel import FeatureMap
from stores.solvers.exact_solver import ExactMoments, oracle_lambda

from ..ScheduleInterface import ScheduleInterface


class OracleSchedule(ScheduleInterface):
    """lambda-greedy computed from the exact moments of the return."""

    def __init__(self, exact: ExactMoments, features: FeatureMap):
        self.exact = exact
        self.features = features

    def first_lambda(self, s0, w_main) -> float:
        return oracle_lambda(s0, w_main, self.exact, self.features)

    def next_lambda(self, t, s_next, context=None) -> float:
        if context is None:
            raise MissingContextError("oracle schedule needs the main learner's weights")
        return oracle_lambda(s_next, context.w_main, self.exact, self.features)

    def state_lambda(self, t, s, w_main) -> float:
        return oracle_lambda(s, w_main, self.exact, self.features)
