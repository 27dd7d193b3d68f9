import logging

import numpy as np

from helpers.errors import InfiniteVarianceError, NumericalError
from stores.mdp.MDPModel import FeatureMap
from stores.solvers.exact_solver import SquaredReturnModel, finite_variance_check

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e12


def var_mspbe_terms(
    w_sq: np.ndarray, sq_model: SquaredReturnModel, d: np.ndarray, features: FeatureMap
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    b = X'D(T_bar v_hat - v_hat), C = X'DX and M = X'D(I - P_bar L_bar)^-1 P_bar (I - L_bar) X,
    where T_bar is the lambda_bar squared-return operator and v_hat = Xw_sq.
    """
    if not finite_variance_check(sq_model).passes:
        raise InfiniteVarianceError("squared-return operator has no fixed point")

    X = features.rows
    D = np.diag(np.asarray(d, dtype=float))
    n = X.shape[0]
    L_bar = sq_model.lambda_bar_diag
    resolvent = np.eye(n) - sq_model.P_bar @ L_bar
    bootstrap = sq_model.P_bar @ (np.eye(n) - L_bar)

    v_hat = X @ np.asarray(w_sq, dtype=float)
    target = np.linalg.solve(resolvent, sq_model.r_bar + bootstrap @ v_hat)

    b = X.T @ D @ (target - v_hat)
    C = X.T @ D @ X
    M = X.T @ D @ np.linalg.solve(resolvent, bootstrap @ X)

    if np.linalg.cond(C) > MAX_CONDITION:
        logger.error("feature covariance is singular (cond %.3e)", np.linalg.cond(C))
        raise NumericalError("singular feature covariance")
    return b, C, M


def var_mspbe(w_sq: np.ndarray, sq_model: SquaredReturnModel, d: np.ndarray, features: FeatureMap) -> float:
    b, C, _ = var_mspbe_terms(w_sq, sq_model, d, features)
    return max(0.0, float(b @ np.linalg.solve(C, b)))


def var_mspbe_gradient(
    w_sq: np.ndarray, sq_model: SquaredReturnModel, d: np.ndarray, features: FeatureMap
) -> np.ndarray:
    """Negative half gradient of var_mspbe: b - M' C^-1 b."""
    b, C, M = var_mspbe_terms(w_sq, sq_model, d, features)
    return b - M.T @ np.linalg.solve(C, b)


def expected_vtd_update(
    w_sq: np.ndarray, sq_model: SquaredReturnModel, d: np.ndarray, features: FeatureMap
) -> np.ndarray:
    """E[delta_bar z_bar] under d; zero at the squared-return fixed point."""
    b, _, _ = var_mspbe_terms(w_sq, sq_model, d, features)
    return b
