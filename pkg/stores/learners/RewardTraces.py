from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RewardTraces:
    """
    Backward-view traces that let E[r_bar z_bar] be computed from past
    rewards and features instead of the future lambda-return.

    z_r carries the reward part, Z_x the part that bootstraps on w. Z_x is
    None until a state with lambda < 1 has been visited; it is zero until then.
    """

    z_bar: np.ndarray
    z_r: np.ndarray
    Z_x: np.ndarray | None = None
    rho_sq_prev: float = 0.0

    def feature_trace(self) -> np.ndarray:
        n = len(self.z_bar)
        return np.zeros((n, n)) if self.Z_x is None else self.Z_x


def init_reward_traces(n_features: int) -> RewardTraces:
    return RewardTraces(z_bar=np.zeros(n_features), z_r=np.zeros(n_features))


def advance_reward_traces(
    tr: RewardTraces,
    rho_t: float,
    gamma_t: float,
    lambda_t: float,
    reward_t: float,
    x_t: np.ndarray,
    gamma_bar_t: float,
    lambda_bar_t: float,
) -> RewardTraces:
    """
    Advance the traces to time t.

    reward_t is the reward received on entering the current state, gamma_t and
    lambda_t belong to that state and gamma_bar_t is the squared discount of
    the transition into it.
    """
    decay = rho_t * gamma_t * lambda_t
    z_r = decay * (tr.rho_sq_prev * reward_t * tr.z_bar + tr.z_r)

    Z_x = tr.Z_x
    if Z_x is not None or lambda_t < 1.0:
        previous = tr.feature_trace()
        bootstrap = tr.rho_sq_prev * gamma_t * (1.0 - lambda_t) * np.outer(tr.z_bar, x_t)
        Z_x = decay * (bootstrap + previous)

    z_bar = x_t + gamma_bar_t * lambda_bar_t * tr.z_bar
    return RewardTraces(z_bar=z_bar, z_r=z_r, Z_x=Z_x, rho_sq_prev=rho_t * rho_t)


def expansion_estimate(tr: RewardTraces, rho_t: float, G_bar_t: float, w: np.ndarray) -> np.ndarray:
    """rho_t^2 G_bar_t^2 z_bar_t + 2 G_bar_t (z_r_t + Z_x_t w)."""
    bootstrap = tr.z_r if tr.Z_x is None else tr.z_r + tr.Z_x @ w
    return rho_t * rho_t * G_bar_t * G_bar_t * tr.z_bar + 2.0 * G_bar_t * bootstrap
