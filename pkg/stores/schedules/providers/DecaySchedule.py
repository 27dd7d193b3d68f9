from ..ScheduleInterface import ScheduleInterface


class DecaySchedule(ScheduleInterface):
    """lambda_t = k / (k + t)."""

    def __init__(self, k: float):
        self.k = float(k)

    def at(self, t: int) -> float:
        return self.k / (self.k + t)

    def first_lambda(self, s0, w_main) -> float:
        return self.at(0)

    def next_lambda(self, t, s_next, context=None) -> float:
        return self.at(t)

    def state_lambda(self, t, s, w_main) -> float:
        return self.at(t)
