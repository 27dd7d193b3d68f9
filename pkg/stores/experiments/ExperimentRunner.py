import logging
import warnings
from dataclasses import dataclass
from functools import partial
from multiprocessing import Pool

import numpy as np
from tqdm import tqdm

from helpers.errors import DivergenceError
from helpers.random_stream import RandomStream, run_seed
from stores.experiments.ExperimentConfig import ErrorMetric, ExperimentConfig, FirstLambda
from stores.learners.GTDLearner import GTDLearner
from stores.mdp.MDPEnums import FeatureMode, Regime
from stores.mdp.MDPModel import FeatureMap, MDPModel, Policy, StateFn
from stores.mdp.features import aliased_features, tabular_features
from stores.mdp.ringworld import build_ringworld, discount_fn, ratio_matrix, ring_policy, sample_step
from stores.schedules.LambdaSchedule import AdapterFeatures, ScheduleKind
from stores.schedules.ScheduleFactory import ScheduleFactory
from stores.schedules.StepContext import StepContext
from stores.solvers.exact_solver import ExactMoments, exact_moments, stationary_distribution, true_values

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentContext:
    """Everything a run needs that does not depend on the seed."""

    model: MDPModel
    target: Policy
    behavior: Policy
    gamma: StateFn
    features: FeatureMap
    rho: np.ndarray
    v: np.ndarray
    d: np.ndarray
    exact: ExactMoments | None
    adapter_features: FeatureMap | None = None

    @property
    def nonterminal(self) -> np.ndarray:
        return ~self.model.terminal

    def value_error(self, w: np.ndarray, metric: ErrorMetric) -> float:
        keep = self.nonterminal
        diff = (self.features.rows @ w)[keep] - self.v[keep]
        if metric is ErrorMetric.MSVE_D_WEIGHTED:
            weights = self.d[keep] / self.d[keep].sum()
            return float(weights @ (diff * diff))
        return float(np.mean(np.abs(diff)))


@dataclass(frozen=True)
class RunResult:
    error_series: np.ndarray
    lambda_series: np.ndarray
    final_lambda_per_state: np.ndarray
    diverged: bool = False
    divergence_step: int | None = None


@dataclass(frozen=True)
class AveragedResult:
    mean_error: np.ndarray
    stderr_error: np.ndarray
    mean_lambda: np.ndarray
    final_lambda: np.ndarray
    seeds: list[int]
    diverged_runs: int
    # (n_runs, n_states); nan rows for diverged runs
    final_lambda_runs: np.ndarray | None = None

    @property
    def n_runs(self) -> int:
        return len(self.seeds)


def build_context(config: ExperimentConfig) -> ExperimentContext:
    model, target = build_ringworld(config.chain_length, config.target_right)
    if config.regime is Regime.ON_POLICY:
        behavior = target
    else:
        behavior = ring_policy(config.chain_length, config.behavior_right)
    gamma = discount_fn(model, config.gamma_const)

    if config.feature_mode is FeatureMode.ALIASED:
        features = aliased_features(config.chain_length, config.alias_pairs)
    else:
        features = tabular_features(config.chain_length)

    exact = None
    if config.schedule.kind is ScheduleKind.ORACLE:
        exact = exact_moments(model, target, behavior, gamma).episodic(model.terminal)

    adapter_features = None
    if config.adapter_features is AdapterFeatures.TABULAR:
        adapter_features = tabular_features(config.chain_length).masked(model.terminal)

    return ExperimentContext(
        model=model,
        target=target,
        behavior=behavior,
        gamma=gamma,
        features=features.masked(model.terminal),
        rho=ratio_matrix(target, behavior),
        v=true_values(model, target, gamma),
        d=stationary_distribution(model, behavior),
        exact=exact,
        adapter_features=adapter_features,
    )


def run_one(config: ExperimentConfig, run_index: int, context: ExperimentContext | None = None) -> RunResult:
    """
    One seeded run of GTD(lambda) on the continuing ring-world stream.

    After a terminating transition the stream restarts from the restart state;
    gamma of the terminal state (0) carries into the next step and cuts every
    trace.
    """
    ctx = context if context is not None else build_context(config)
    rng = RandomStream(run_seed(config.base_seed, run_index))
    model, features = ctx.model, ctx.features
    n_steps = config.steps

    learner = GTDLearner(features.n_features, config.alpha, config.alpha_h)
    schedule = ScheduleFactory(
        features,
        regime=config.regime,
        gamma_const=config.gamma_const,
        r_max=config.r_max,
        alpha=config.adapter_alpha,
        off_policy_init=config.off_policy_init,
        exact=ctx.exact,
        adapter_features=ctx.adapter_features,
        trace=config.adapter_trace,
    ).create(config.schedule)

    s = model.restart_state
    gamma_t = ctx.gamma[s]
    if config.first_lambda is FirstLambda.ONE:
        lambda_t = 1.0
    else:
        lambda_t = schedule.first_lambda(s, learner.w)

    errors = np.empty(n_steps)
    lambdas = np.empty(n_steps)
    for t in range(n_steps):
        step = sample_step(model, ctx.behavior, s, rng)
        x_t, x_next = features(s), features(step.s_next)
        rho_t = float(ctx.rho[s, step.a])
        gamma_next = ctx.gamma[step.s_next]
        try:
            context_t = StepContext(
                w_main=learner.w,
                x_t=x_t,
                x_next=x_next,
                reward=step.reward,
                rho_t=rho_t,
                gamma_t=gamma_t,
                gamma_next=gamma_next,
                s_t=s,
            )
            lambda_next = schedule.next_lambda(t + 1, step.s_next, context_t)
            learner.step(x_t, x_next, step.reward, rho_t, gamma_t, gamma_next, lambda_t, lambda_next)
        except DivergenceError as exc:
            logger.warning("Run %d of %s diverged at step %d: %s", run_index, config.label, t, exc)
            return RunResult(
                error_series=errors[:t].copy(),
                lambda_series=lambdas[:t].copy(),
                final_lambda_per_state=np.full(model.n_states, np.nan),
                diverged=True,
                divergence_step=t,
            )

        errors[t] = ctx.value_error(learner.w, config.error_metric)
        lambdas[t] = lambda_next

        if step.terminated:
            s = model.restart_state
            if config.reset_trace_on_teleport:
                learner.reset_trace()
        else:
            s = step.s_next
        gamma_t, lambda_t = gamma_next, lambda_next

    final_lambda = np.array([schedule.state_lambda(n_steps, state, learner.w) for state in range(model.n_states)])
    return RunResult(error_series=errors, lambda_series=lambdas, final_lambda_per_state=final_lambda)


def _padded(series: np.ndarray, n_steps: int, fill: float) -> np.ndarray:
    if len(series) == n_steps:
        return series
    out = np.full(n_steps, fill)
    out[: len(series)] = series
    return out


def aggregate(results: list[RunResult], n_steps: int, seeds: list[int]) -> AveragedResult:
    """Pointwise mean and standard error, reduced in run-index order."""
    errors = np.vstack([_padded(r.error_series, n_steps, np.inf) for r in results])
    lambdas = np.vstack([_padded(r.lambda_series, n_steps, np.nan) for r in results])
    finals = np.vstack([r.final_lambda_per_state for r in results])

    n = len(results)
    with np.errstate(invalid="ignore", over="ignore"), warnings.catch_warnings():
        # columns where every run has diverged average to nan
        warnings.simplefilter("ignore", RuntimeWarning)
        mean_error = errors.mean(axis=0)
        if n > 1:
            stderr = errors.std(axis=0, ddof=1) / np.sqrt(n)
            stderr = np.where(np.isfinite(mean_error), stderr, np.inf)
        else:
            stderr = np.zeros(n_steps)
        mean_lambda = np.nanmean(lambdas, axis=0)
        final_lambda = np.nanmean(finals, axis=0)

    return AveragedResult(
        mean_error=mean_error,
        stderr_error=stderr,
        mean_lambda=mean_lambda,
        final_lambda=final_lambda,
        seeds=seeds,
        diverged_runs=sum(r.diverged for r in results),
        final_lambda_runs=finals,
    )


def run_averaged(
    config: ExperimentConfig,
    jobs: int = 1,
    context: ExperimentContext | None = None,
    progress: bool = False,
) -> AveragedResult:
    ctx = context if context is not None else build_context(config)
    worker = partial(run_one, config, context=ctx)
    indices = range(config.n_runs)

    if jobs > 1 and config.n_runs > 1:
        with Pool(min(jobs, config.n_runs)) as pool:
            # imap keeps run order
            results = list(tqdm(pool.imap(worker, indices), total=config.n_runs, desc=config.label, disable=not progress))
    else:
        results = [worker(i) for i in tqdm(indices, desc=config.label, disable=not progress)]

    averaged = aggregate(results, config.steps, [run_seed(config.base_seed, i) for i in indices])
    logger.info(
        "%s: %d runs, final mean error %.4f, %d diverged",
        config.label,
        averaged.n_runs,
        averaged.mean_error[-1] if config.steps else float("nan"),
        averaged.diverged_runs,
    )
    return averaged
