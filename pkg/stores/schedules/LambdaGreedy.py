"""The lambda-greedy adapter: picks each next lambda from bias and variance estimates."""

import logging
from dataclasses import dataclass

import numpy as np

from helpers.errors import ContractViolationError, DivergenceError
from stores.learners.LearnerEnums import TraceKind
from stores.learners.VTDLearner import VtdState, bar_quantities, init_vtd, var_estimate, vtd_step
from stores.mdp.MDPEnums import Regime
from stores.schedules.LambdaSchedule import OffPolicyInit

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LambdaGreedyState:
    w_err: np.ndarray
    z_g: np.ndarray
    vtd: VtdState
    alpha: float
    trace: TraceKind = TraceKind.DUTCH
    # adapter-feature value of x_t under the previous step's w_err
    v_old: float = 0.0

    @property
    def w_sq(self) -> np.ndarray:
        return self.vtd.w_sq


def lambda_from_bias_variance(err_sq: float, var_g: float) -> float:
    if err_sq < 0.0 or var_g < 0.0:
        raise ContractViolationError(f"bias and variance must be nonnegative, got {err_sq}, {var_g}")
    total = err_sq + var_g
    if total == 0.0:
        # every lambda is equally good here; 0 keeps future traces short
        return 0.0
    return float(err_sq / total)


def init_lambda_greedy(
    n_features: int,
    regime: Regime,
    gamma_const: float,
    r_max: float,
    off_policy_init: OffPolicyInit = OffPolicyInit.SQUARED,
    alpha: float = 0.1,
    trace: TraceKind = TraceKind.DUTCH,
) -> LambdaGreedyState:
    """
    :param n_features: width of the adapter's own feature vectors
    :param trace: eligibility trace shared by both moment learners
    """
    if gamma_const >= 1.0:
        raise ContractViolationError(f"gamma_const must be below 1, got {gamma_const}")
    scale = r_max / (1.0 - gamma_const)

    if Regime(regime) is Regime.ON_POLICY:
        w_err = np.full(n_features, scale)
        w_sq = np.zeros(n_features)
    else:
        w_err = np.zeros(n_features)
        magnitude = scale**2 if OffPolicyInit(off_policy_init) is OffPolicyInit.SQUARED else scale
        w_sq = np.full(n_features, magnitude)

    trace = TraceKind(trace)
    return LambdaGreedyState(
        w_err=w_err,
        z_g=np.zeros(n_features),
        vtd=init_vtd(n_features, alpha, w_sq0=w_sq, trace=trace),
        alpha=alpha,
        trace=trace,
    )


def state_lambda(
    state: LambdaGreedyState, w_main: np.ndarray, x: np.ndarray, adapter_x: np.ndarray | None = None
) -> float:
    """lambda the adapter would emit on entering a state with main features x."""
    ax = x if adapter_x is None else adapter_x
    first = float(ax @ state.w_err)
    err_sq = (first - float(x @ w_main)) ** 2
    return lambda_from_bias_variance(err_sq, var_estimate(state.w_sq, state.w_err, ax))


def initial_lambda(
    state: LambdaGreedyState,
    w_main: np.ndarray,
    x0: np.ndarray,
    regime: Regime,
    adapter_x0: np.ndarray | None = None,
) -> float:
    if Regime(regime) is Regime.ON_POLICY:
        return 1.0
    return state_lambda(state, w_main, x0, adapter_x0)


def lambda_greedy_step(
    state: LambdaGreedyState,
    w_main: np.ndarray,
    x_t: np.ndarray,
    x_next: np.ndarray,
    reward: float,
    rho_t: float,
    gamma_t: float,
    gamma_next: float,
    adapter_x_t: np.ndarray | None = None,
    adapter_x_next: np.ndarray | None = None,
) -> tuple[LambdaGreedyState, float]:
    """
    Advance both moment learners on one transition and return lambda for the
    successor. lambda is read from the weights as they stood before this
    transition, so it does not depend on rho_t.

    :param adapter_x_t: adapter features of x_t, defaults to the main features
    :param adapter_x_next: adapter features of x_next, defaults to the main features
    """
    ax_t = x_t if adapter_x_t is None else adapter_x_t
    ax_next = x_next if adapter_x_next is None else adapter_x_next

    lambda_next = state_lambda(state, w_main, x_next, ax_next)
    g_bar = float(ax_next @ state.w_err)
    v_t = float(ax_t @ state.w_err)
    delta = reward + gamma_next * g_bar - v_t

    if state.trace is TraceKind.DUTCH:
        shrink = 1.0 - state.alpha * rho_t * gamma_t * float(state.z_g @ ax_t)
        z_g = rho_t * (gamma_t * state.z_g + shrink * ax_t)
        w_err = state.w_err + state.alpha * (delta * z_g + (v_t - state.v_old) * (z_g - rho_t * ax_t))
    else:
        z_g = rho_t * (gamma_t * state.z_g + ax_t)
        w_err = state.w_err + state.alpha * delta * z_g

    _, r_bar, gamma_bar = bar_quantities(rho_t, gamma_next, 1.0, reward, x_next, w_main, g_bar)
    vtd, _ = vtd_step(state.vtd, ax_t, ax_next, r_bar, gamma_bar, state.vtd.gamma_bar_prev, 1.0, 1.0)

    if not (np.all(np.isfinite(w_err)) and np.all(np.isfinite(z_g))):
        logger.error("lambda-greedy first-moment learner diverged at step %d", vtd.steps)
        raise DivergenceError(vtd.steps, "first-moment estimate became non-finite")

    return (
        LambdaGreedyState(w_err=w_err, z_g=z_g, vtd=vtd, alpha=state.alpha, trace=state.trace, v_old=g_bar),
        lambda_next,
    )
