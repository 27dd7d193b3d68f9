from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StepContext:
    """Inputs of one transition, taken before the main learner updates."""

    w_main: np.ndarray
    x_t: np.ndarray
    x_next: np.ndarray
    reward: float
    rho_t: float
    gamma_t: float
    gamma_next: float
    # state index of x_t; schedules with their own features need it
    s_t: int | None = None
