"""Second moment of the lambda-return by temporal differences (VTD)."""

import logging
from dataclasses import dataclass, replace

import numpy as np

from helpers.errors import ContractViolationError, DivergenceError
from stores.learners.LearnerEnums import TraceKind, VtdMode
from stores.learners.LearnerInterface import LearnerInterface
from stores.mdp.MDPModel import StateFn

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VtdState:
    w_sq: np.ndarray
    h_sq: np.ndarray
    z_bar: np.ndarray
    alpha_bar: float
    lambda_bar: StateFn | None = None  # None means lambda_bar = 1 everywhere
    gamma_bar_prev: float = 0.0
    mode: VtdMode = VtdMode.BOOTSTRAP
    steps: int = 0
    trace: TraceKind = TraceKind.ACCUMULATING
    # x_t . w_sq as seen one step earlier; only the dutch trace reads it
    v_old: float = 0.0

    def __post_init__(self):
        if not (len(self.w_sq) == len(self.h_sq) == len(self.z_bar)):
            raise ContractViolationError("w_sq, h_sq and z_bar must have the same length")
        if self.alpha_bar < 0.0:
            raise ContractViolationError("alpha_bar must be nonnegative")
        if self.trace is TraceKind.DUTCH and (self.mode is VtdMode.LMS or self.uses_correction):
            raise ContractViolationError("dutch traces need the plain bootstrap update with lambda_bar = 1")

    @property
    def uses_correction(self) -> bool:
        return self.lambda_bar is not None and bool(np.any(self.lambda_bar.values < 1.0))

    def lambda_bar_at(self, s: int) -> float:
        return 1.0 if self.lambda_bar is None else self.lambda_bar[s]


def init_vtd(
    n_features: int,
    alpha_bar: float,
    lambda_bar: StateFn | None = None,
    mode: VtdMode = VtdMode.BOOTSTRAP,
    w_sq0: np.ndarray | None = None,
    trace: TraceKind = TraceKind.ACCUMULATING,
) -> VtdState:
    w_sq = np.zeros(n_features) if w_sq0 is None else np.array(w_sq0, dtype=float)
    return VtdState(
        w_sq=w_sq,
        h_sq=np.zeros(n_features),
        z_bar=np.zeros(n_features),
        alpha_bar=alpha_bar,
        lambda_bar=lambda_bar,
        mode=mode,
        trace=TraceKind(trace),
    )


def bar_quantities(
    rho: float,
    gamma_next: float,
    lambda_next: float,
    reward: float,
    x_next: np.ndarray,
    w_main: np.ndarray,
    g_bar_next: float,
) -> tuple[float, float, float]:
    """
    G_bar = R + gamma'(1 - lambda') x'.w_main
    r_bar = rho^2 G_bar^2 + 2 rho^2 gamma' lambda' G_bar g_bar
    gamma_bar = rho^2 gamma'^2 lambda'^2
    """
    G_bar = reward + gamma_next * (1.0 - lambda_next) * float(x_next @ w_main)
    rho_sq = rho * rho
    r_bar = rho_sq * G_bar * G_bar + 2.0 * rho_sq * gamma_next * lambda_next * G_bar * g_bar_next
    gamma_bar = rho_sq * (gamma_next * lambda_next) ** 2
    return G_bar, r_bar, gamma_bar


def var_estimate(w_sq: np.ndarray, w_err: np.ndarray, x: np.ndarray) -> float:
    first = float(x @ w_err)
    return max(0.0, float(x @ w_sq) - first * first)


def vtd_step(
    state: VtdState,
    x_t: np.ndarray,
    x_next: np.ndarray,
    r_bar: float,
    gamma_bar: float,
    gamma_bar_prev: float,
    lambda_bar_t: float,
    lambda_bar_next: float,
) -> tuple[VtdState, float]:
    # the trace decays by the gamma_bar of the transition that led into x_t
    decay = gamma_bar_prev * lambda_bar_t
    v_t = float(x_t @ state.w_sq)
    delta_bar = r_bar + gamma_bar * float(x_next @ state.w_sq) - v_t

    if state.trace is TraceKind.DUTCH:
        z_bar = decay * state.z_bar + (1.0 - state.alpha_bar * decay * float(state.z_bar @ x_t)) * x_t
        w_sq = state.w_sq + state.alpha_bar * (delta_bar * z_bar + (v_t - state.v_old) * (z_bar - x_t))
        h_sq = state.h_sq
    else:
        z_bar = x_t + decay * state.z_bar
        if state.mode is VtdMode.LMS:
            w_sq = state.w_sq + state.alpha_bar * (r_bar * z_bar - v_t * x_t)
            h_sq = state.h_sq
        elif state.uses_correction:
            correction = gamma_bar * (1.0 - lambda_bar_next) * float(z_bar @ state.h_sq) * x_next
            w_sq = state.w_sq + state.alpha_bar * (delta_bar * z_bar - correction)
            h_sq = state.h_sq + state.alpha_bar * (delta_bar * z_bar - float(x_t @ state.h_sq) * x_t)
        else:
            w_sq = state.w_sq + state.alpha_bar * delta_bar * z_bar
            h_sq = state.h_sq

    steps = state.steps + 1
    if not (np.isfinite(delta_bar) and np.all(np.isfinite(w_sq)) and np.all(np.isfinite(z_bar))):
        logger.error("VTD learner diverged at step %d (alpha_bar=%g)", steps, state.alpha_bar)
        raise DivergenceError(steps, "second-moment estimate became non-finite")

    new_state = replace(
        state,
        w_sq=w_sq,
        h_sq=h_sq,
        z_bar=z_bar,
        gamma_bar_prev=gamma_bar,
        steps=steps,
        v_old=float(x_next @ state.w_sq),
    )
    return new_state, delta_bar


class VTDLearner(LearnerInterface):
    def __init__(
        self,
        n_features: int,
        alpha_bar: float,
        lambda_bar: StateFn | None = None,
        mode: VtdMode = VtdMode.BOOTSTRAP,
        trace: TraceKind = TraceKind.ACCUMULATING,
    ):
        self.state = init_vtd(n_features, alpha_bar, lambda_bar, mode, trace=trace)

    def step(self, x_t, x_next, r_bar, gamma_bar, lambda_bar_t=1.0, lambda_bar_next=1.0) -> float:
        self.state, delta_bar = vtd_step(
            self.state, x_t, x_next, r_bar, gamma_bar, self.state.gamma_bar_prev, lambda_bar_t, lambda_bar_next
        )
        return delta_bar

    def predict(self, x: np.ndarray) -> float:
        return float(x @ self.state.w_sq)

    def reset_trace(self):
        self.state = replace(self.state, z_bar=np.zeros_like(self.state.z_bar), gamma_bar_prev=0.0, v_old=0.0)
