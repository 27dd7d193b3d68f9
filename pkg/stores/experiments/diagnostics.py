import numpy as np

from stores.experiments.ExperimentConfig import ExperimentConfig
from stores.experiments.ExperimentRunner import ExperimentContext, build_context
from stores.mdp.MDPModel import StateFn
from stores.mdp.ringworld import constant_fn
from stores.schedules.LambdaSchedule import ScheduleKind
from stores.solvers.exact_solver import (
    ExactMoments,
    FiniteVarianceReport,
    SquaredReturnModel,
    exact_moments,
    finite_variance_check,
    lambda_return_values,
    power_sum,
    squared_return_model,
)

POWER_SUM_HORIZON = 200


def oracle_moments(config: ExperimentConfig) -> tuple[ExperimentContext, ExactMoments]:
    ctx = build_context(config)
    return ctx, exact_moments(ctx.model, ctx.target, ctx.behavior, ctx.gamma)


def variance_lambda(config: ExperimentConfig, n_states: int) -> StateFn:
    """lambda the squared return is built with: the fixed value, otherwise 1."""
    if config.schedule.kind is ScheduleKind.FIXED:
        return constant_fn(n_states, config.schedule.value)
    return constant_fn(n_states, 1.0)


def config_squared_return(config: ExperimentConfig) -> SquaredReturnModel:
    ctx = build_context(config)
    n = ctx.model.n_states
    lam = variance_lambda(config, n)
    estimates = np.zeros(n)
    v_first = lambda_return_values(ctx.model, ctx.target, ctx.gamma, lam, estimates)
    return squared_return_model(ctx.model, ctx.target, ctx.behavior, ctx.gamma, lam, estimates, v_first)


def check_variance(
    config: ExperimentConfig, horizon: int = POWER_SUM_HORIZON
) -> tuple[FiniteVarianceReport, float]:
    """The finite-variance report and the largest entry of the truncated power sum."""
    sq_model = config_squared_return(config)
    with np.errstate(over="ignore", invalid="ignore"):
        tail = float(np.max(np.abs(power_sum(sq_model, horizon))))
    return finite_variance_check(sq_model), tail


def weighted_median(values: np.ndarray, weights: np.ndarray) -> float:
    """Smallest value whose cumulative weight reaches half the total."""
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if values.size == 0 or weights.sum() <= 0.0:
        return float("nan")
    order = np.argsort(values, kind="stable")
    cumulative = np.cumsum(weights[order]) / weights.sum()
    return float(values[order][np.searchsorted(cumulative, 0.5)])


def typical_lambda(final_lambda: np.ndarray, d: np.ndarray, nonterminal: np.ndarray) -> float:
    """d-weighted median of one run's final per-state lambda over non-terminal states."""
    keep = np.asarray(nonterminal, dtype=bool)
    return weighted_median(np.asarray(final_lambda)[keep], np.asarray(d)[keep])


def collapse_statistic(final_lambda_runs: np.ndarray, d: np.ndarray, nonterminal: np.ndarray) -> float:
    """Median over runs of typical_lambda; diverged runs (nan rows) are left out."""
    per_run = np.array([typical_lambda(row, d, nonterminal) for row in final_lambda_runs if np.all(np.isfinite(row))])
    if per_run.size == 0:
        return float("nan")
    return float(np.median(per_run))


def aliasing_wins(final_lambda_runs: np.ndarray, aliased: list[int], others: list[int]) -> int:
    """Runs whose mean final lambda on the aliased states beats the mean on the other states."""
    runs = np.asarray(final_lambda_runs, dtype=float)
    with np.errstate(invalid="ignore"):
        wins = runs[:, aliased].mean(axis=1) > runs[:, others].mean(axis=1)
    return int(np.sum(wins))
