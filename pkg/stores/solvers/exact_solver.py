"""Closed-form first and second moments of the return on tabular models."""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from helpers.errors import InfiniteVarianceError, NoFixedPointError, NumericalError
from helpers.random_stream import RandomStream
from stores.mdp.MDPModel import FeatureMap, MDPModel, Policy, StateFn
from stores.mdp.ringworld import constant_fn, ratio_matrix
from stores.schedules.LambdaGreedy import lambda_from_bias_variance

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
VARIANCE_TOL = 1e-9


@dataclass(frozen=True)
class MarkovChainView:
    """The model seen through one policy: P_pi(s, s'), mean reward per pair and per state."""

    P_pi: np.ndarray
    r_pair: np.ndarray
    r_pi: np.ndarray
    d: np.ndarray | None = None


@dataclass(frozen=True)
class SquaredReturnModel:
    P_bar: np.ndarray
    r_bar: np.ndarray
    lambda_bar_diag: np.ndarray

    @property
    def operator(self) -> np.ndarray:
        return self.P_bar @ self.lambda_bar_diag


@dataclass(frozen=True)
class ExactMoments:
    v: np.ndarray
    m2: np.ndarray
    variance: np.ndarray

    def __post_init__(self):
        if np.min(self.variance) < -VARIANCE_TOL:
            raise NumericalError(f"second moment below squared mean by {-np.min(self.variance):.3e}")

    @property
    def reported_variance(self) -> np.ndarray:
        return np.maximum(self.variance, 0.0)

    def episodic(self, terminal: np.ndarray) -> "ExactMoments":
        """Moments as the learner sees them: zero at terminal states."""
        keep = ~np.asarray(terminal, dtype=bool)
        return ExactMoments(v=self.v * keep, m2=self.m2 * keep, variance=self.variance * keep)


class FiniteVarianceReport(NamedTuple):
    passes: bool
    max_singular_value: float
    spectral_radius: float


def policy_matrix(model: MDPModel, policy: Policy) -> np.ndarray:
    return np.einsum("sa,sat->st", policy.probs, model.transition)


def spectral_radius(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))


def _solve_checked(A: np.ndarray, b: np.ndarray, what: str) -> np.ndarray:
    identity = np.eye(A.shape[0])
    try:
        x = np.linalg.solve(identity - A, b)
    except np.linalg.LinAlgError as exc:
        raise NoFixedPointError(f"{what}: singular system") from exc
    residual = np.max(np.abs(x - (b + A @ x))) if x.size else 0.0
    if not np.isfinite(residual) or residual > RESIDUAL_TOL * max(1.0, np.max(np.abs(x))):
        logger.warning("%s: residual %.3e after solve", what, residual)
        raise NumericalError(f"{what}: residual {residual:.3e} exceeds tolerance")
    return x


def stationary_distribution(
    model: MDPModel, policy: Policy, tol: float = 1e-12, max_iter: int = 1_000_000
) -> np.ndarray:
    """
    Stationary distribution of the teleport-augmented chain under `policy`.

    Power iteration runs on the lazy chain (I + P)/2, which shares the
    stationary distribution but cannot oscillate on periodic chains.
    """
    P = policy_matrix(model, policy)
    lazy = 0.5 * (np.eye(P.shape[0]) + P)
    d = np.full(P.shape[0], 1.0 / P.shape[0])
    for _ in range(max_iter):
        d_next = d @ lazy
        if np.abs(d_next - d).sum() < tol:
            return d_next / d_next.sum()
        d = d_next
    raise NumericalError(f"power iteration did not converge in {max_iter} iterations")


def chain_view(model: MDPModel, policy: Policy, with_distribution: bool = True) -> MarkovChainView:
    P_pi = policy_matrix(model, policy)
    reward_mass = np.einsum("sa,sat,sat->st", policy.probs, model.transition, model.reward)
    with np.errstate(divide="ignore", invalid="ignore"):
        r_pair = np.where(P_pi > 0.0, reward_mass / P_pi, 0.0)
    return MarkovChainView(
        P_pi=P_pi,
        r_pair=r_pair,
        r_pi=reward_mass.sum(axis=1),
        d=stationary_distribution(model, policy) if with_distribution else None,
    )


def true_values(model: MDPModel, policy: Policy, gamma: StateFn) -> np.ndarray:
    """v = r_pi + P_pi diag(gamma) v, solved exactly."""
    chain = chain_view(model, policy, with_distribution=False)
    A = chain.P_pi * gamma.values[None, :]
    radius = spectral_radius(A)
    if radius >= 1.0:
        raise NoFixedPointError(f"discounted transition matrix has spectral radius {radius:.6f}")
    return _solve_checked(A, chain.r_pi, "true_values")


def lambda_return_values(
    model: MDPModel, policy: Policy, gamma: StateFn, lam: StateFn, estimates: np.ndarray
) -> np.ndarray:
    """Expected lambda-return bootstrapping on fixed per-state estimates."""
    chain = chain_view(model, policy, with_distribution=False)
    g, l = gamma.values, lam.values
    A = chain.P_pi * (g * l)[None, :]
    if spectral_radius(A) >= 1.0:
        raise NoFixedPointError("lambda-return system is not contractive")
    b = chain.r_pi + chain.P_pi @ (g * (1.0 - l) * np.asarray(estimates, dtype=float))
    return _solve_checked(A, b, "lambda_return_values")


def squared_return_model(
    model: MDPModel,
    target: Policy,
    behavior: Policy,
    gamma: StateFn,
    lam: StateFn,
    w: np.ndarray,
    v_first: np.ndarray,
    features: FeatureMap | None = None,
    lambda_bar: StateFn | None = None,
) -> SquaredReturnModel:
    """
    Transition matrix and expected reward of the squared lambda-return.

    P_bar(s, s') = sum_a P(s,a,s') mu(s,a) rho(s,a)^2 gamma(s')^2 lambda(s')^2
    r_bar(s)     = sum_a,s' P mu rho^2 (G_bar^2 + 2 gamma(s') lambda(s') G_bar v_first(s'))
    with G_bar = R + gamma(s') (1 - lambda(s')) x(s')'w.
    `w` is a weight vector when `features` is given, otherwise per-state estimates.
    """
    rho = ratio_matrix(target, behavior)
    mu = behavior.probs
    g, l = gamma.values, lam.values
    estimates = features.rows @ w if features is not None else np.asarray(w, dtype=float)
    v_first = np.asarray(v_first, dtype=float)

    weight = mu * rho**2
    P_bar = np.einsum("sa,sat->st", weight, model.transition) * ((g * l) ** 2)[None, :]

    G_bar = model.reward + (g * (1.0 - l) * estimates)[None, None, :]
    per_transition = G_bar**2 + 2.0 * (g * l * v_first)[None, None, :] * G_bar
    r_bar = np.einsum("sa,sat,sat->s", weight, model.transition, per_transition)

    if lambda_bar is None:
        lambda_bar = constant_fn(model.n_states, 1.0)
    return SquaredReturnModel(P_bar=P_bar, r_bar=r_bar, lambda_bar_diag=np.diag(lambda_bar.values))


def finite_variance_check(sq_model: SquaredReturnModel) -> FiniteVarianceReport:
    """
    Largest singular value and spectral radius of P_bar Lambda_bar.

    The series sum_t (P_bar Lambda_bar)^t converges exactly when the spectral
    radius is below 1, so that decides `passes`; sigma_max < 1 is the
    stricter sufficient condition and is reported alongside.
    """
    operator = sq_model.operator
    sigma = float(np.linalg.norm(operator, 2)) if operator.size else 0.0
    radius = spectral_radius(operator)
    report = FiniteVarianceReport(passes=radius < 1.0, max_singular_value=sigma, spectral_radius=radius)
    if not report.passes:
        logger.warning("squared-return operator is not contractive (radius %.6f)", radius)
    return report


def second_moment(sq_model: SquaredReturnModel) -> np.ndarray:
    """m2 = (I - P_bar)^-1 r_bar; lambda_bar only shapes the learning operator."""
    full_trace = SquaredReturnModel(
        P_bar=sq_model.P_bar,
        r_bar=sq_model.r_bar,
        lambda_bar_diag=np.eye(sq_model.P_bar.shape[0]),
    )
    report = finite_variance_check(full_trace)
    if not report.passes:
        raise InfiniteVarianceError(
            f"the variance of the return is infinite (spectral radius {report.spectral_radius:.6f})"
        )
    return _solve_checked(sq_model.P_bar, sq_model.r_bar, "second_moment")


def power_sum(sq_model: SquaredReturnModel, horizon: int) -> np.ndarray:
    """Truncated series sum_{t<=horizon} (P_bar Lambda_bar)^t r_bar."""
    operator = sq_model.operator
    term = np.array(sq_model.r_bar, dtype=float)
    total = term.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(horizon):
            term = operator @ term
            total = total + term
    return total


def exact_moments(model: MDPModel, target: Policy, behavior: Policy, gamma: StateFn) -> ExactMoments:
    """First and second moments of the Monte-Carlo return (lambda = 1)."""
    v = true_values(model, target, gamma)
    ones = constant_fn(model.n_states, 1.0)
    sq_model = squared_return_model(
        model, target, behavior, gamma, ones, w=np.zeros(model.n_states), v_first=v
    )
    m2 = second_moment(sq_model)
    return ExactMoments(v=v, m2=m2, variance=m2 - v**2)


def oracle_lambda(s_next: int, w_t: np.ndarray, exact: ExactMoments, features: FeatureMap) -> float:
    err_sq = float((exact.v[s_next] - features(s_next) @ w_t) ** 2)
    var = max(0.0, float(exact.variance[s_next]))
    return lambda_from_bias_variance(err_sq, var)


def mc_moments(
    model: MDPModel,
    target: Policy,
    behavior: Policy,
    gamma: StateFn,
    state: int,
    n_rollouts: int,
    horizon: int,
    rng: RandomStream,
) -> tuple[float, float]:
    """
    Sample mean of G and G^2 from `state` over importance-weighted rollouts
    under `behavior`, truncated at `horizon` steps.
    """
    rho = ratio_matrix(target, behavior)
    states = np.full(n_rollouts, state, dtype=int)
    weight = np.ones(n_rollouts)
    returns = np.zeros(n_rollouts)
    alive = np.ones(n_rollouts, dtype=bool)

    for _ in range(horizon):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        s = states[idx]
        a = rng.categorical_rows(behavior.probs[s])
        s_next = rng.categorical_rows(model.transition[s, a])
        step_rho = rho[s, a]
        returns[idx] += weight[idx] * step_rho * model.reward[s, a, s_next]
        weight[idx] *= step_rho * gamma.values[s_next]
        states[idx] = s_next
        alive[idx] = weight[idx] != 0.0

    return float(np.mean(returns)), float(np.mean(returns**2))
