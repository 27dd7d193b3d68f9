import logging
from dataclasses import dataclass, replace

import numpy as np

from helpers.errors import ContractViolationError, DivergenceError
from stores.learners.LearnerInterface import LearnerInterface

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GtdState:
    w: np.ndarray
    h: np.ndarray
    e: np.ndarray
    alpha: float
    alpha_h: float
    steps: int = 0

    def __post_init__(self):
        if not (len(self.w) == len(self.h) == len(self.e)):
            raise ContractViolationError("w, h and e must have the same length")
        if self.alpha < 0.0 or self.alpha_h < 0.0:
            raise ContractViolationError("step-sizes must be nonnegative")


def init_gtd(n_features: int, alpha: float, alpha_h: float, w0: np.ndarray | None = None) -> GtdState:
    w = np.zeros(n_features) if w0 is None else np.array(w0, dtype=float)
    return GtdState(w=w, h=np.zeros(n_features), e=np.zeros(n_features), alpha=alpha, alpha_h=alpha_h)


def predict(w: np.ndarray, x: np.ndarray) -> float:
    if len(w) != len(x):
        raise ContractViolationError(f"weights have {len(w)} entries but features have {len(x)}")
    return float(x @ w)


def reset_trace(state: GtdState) -> GtdState:
    return replace(state, e=np.zeros_like(state.e))


def gtd_step(
    state: GtdState,
    x_t: np.ndarray,
    x_next: np.ndarray,
    reward: float,
    rho_t: float,
    gamma_t: float,
    gamma_next: float,
    lambda_t: float,
    lambda_next: float,
) -> tuple[GtdState, float]:
    """
    One GTD(lambda) update with state-based gamma and lambda.

    The trace decays with the current state's gamma and lambda; the gradient
    correction uses the successor's. w and h both read the pre-step weights.
    """
    e = rho_t * (gamma_t * lambda_t * state.e + x_t)
    delta = reward + gamma_next * (state.w @ x_next) - state.w @ x_t
    correction = gamma_next * (1.0 - lambda_next) * (e @ state.h) * x_next
    w = state.w + state.alpha * (delta * e - correction)
    h = state.h + state.alpha_h * (delta * e - (state.h @ x_t) * x_t)

    steps = state.steps + 1
    if not (np.isfinite(delta) and np.all(np.isfinite(w)) and np.all(np.isfinite(h)) and np.all(np.isfinite(e))):
        logger.error("GTD learner diverged at step %d (alpha=%g, alpha_h=%g)", steps, state.alpha, state.alpha_h)
        raise DivergenceError(steps)

    return GtdState(w=w, h=h, e=e, alpha=state.alpha, alpha_h=state.alpha_h, steps=steps), float(delta)


class GTDLearner(LearnerInterface):
    def __init__(self, n_features: int, alpha: float, alpha_h: float, w0: np.ndarray | None = None):
        self.state = init_gtd(n_features, alpha, alpha_h, w0)

    @property
    def w(self) -> np.ndarray:
        return self.state.w

    def step(self, x_t, x_next, reward, rho_t, gamma_t, gamma_next, lambda_t, lambda_next) -> float:
        self.state, delta = gtd_step(
            self.state, x_t, x_next, reward, rho_t, gamma_t, gamma_next, lambda_t, lambda_next
        )
        return delta

    def predict(self, x: np.ndarray) -> float:
        return predict(self.state.w, x)

    def reset_trace(self):
        self.state = reset_trace(self.state)
