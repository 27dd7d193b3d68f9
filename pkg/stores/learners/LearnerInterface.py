from abc import ABC, abstractmethod

import numpy as np


class LearnerInterface(ABC):
    @abstractmethod
    def step(self, *args, **kwargs) -> float:
        """
        Consume one transition of the stream and update the learner in place.
        :return: The TD error of the transition.
        """
        pass

    @abstractmethod
    def predict(self, x: np.ndarray) -> float:
        """
        Estimate for a feature vector.
        :param x: The feature vector of a state.
        """
        pass

    @abstractmethod
    def reset_trace(self):
        """Clear the eligibility trace, leaving the weights untouched."""
        pass
