from abc import ABC, abstractmethod

import numpy as np

from stores.schedules.StepContext import StepContext


class ScheduleInterface(ABC):
    @abstractmethod
    def first_lambda(self, s0: int, w_main: np.ndarray) -> float:
        """
        lambda used on the first transition of a run.
        :param s0: The state the stream starts in.
        :param w_main: The main learner's initial weights.
        """
        pass

    @abstractmethod
    def next_lambda(self, t: int, s_next: int, context: StepContext | None) -> float:
        """
        lambda for the successor state, used from step t on.
        :param t: The step at which the successor is current.
        :param s_next: The successor state.
        :param context: Per-step inputs; required by adaptive schedules.
        :return: A value in [0, 1].
        """
        pass

    @abstractmethod
    def state_lambda(self, t: int, s: int, w_main: np.ndarray) -> float:
        """
        lambda the schedule would emit on entering state s at step t.
        """
        pass
