from ..ScheduleInterface import ScheduleInterface


class FixedSchedule(ScheduleInterface):
    def __init__(self, value: float):
        self.value = float(value)

    def first_lambda(self, s0, w_main) -> float:
        return self.value

    def next_lambda(self, t, s_next, context=None) -> float:
        return self.value

    def state_lambda(self, t, s, w_main) -> float:
        return self.value
