from dataclasses import replace

import numpy as np
import pytest

from helpers.errors import ContractViolationError, MissingContextError
from stores.experiments.ExperimentConfig import ExperimentConfig
from stores.experiments.ExperimentRunner import build_context, run_averaged, run_one
from stores.experiments.diagnostics import typical_lambda
from stores.learners.LearnerEnums import TraceKind
from stores.learners.VTDLearner import init_vtd
from stores.mdp.MDPEnums import Regime
from stores.mdp.features import aliased_features, tabular_features
from stores.schedules.LambdaGreedy import (
    LambdaGreedyState,
    init_lambda_greedy,
    initial_lambda,
    lambda_from_bias_variance,
    lambda_greedy_step,
    state_lambda,
)
from stores.schedules.LambdaSchedule import LambdaSchedule, OffPolicyInit
from stores.schedules.ScheduleFactory import ScheduleFactory
from stores.schedules.StepContext import StepContext


def _on_policy(n: int = 3, gamma: float = 0.95) -> LambdaGreedyState:
    return init_lambda_greedy(n, Regime.ON_POLICY, gamma, 1.0, alpha=0.1)


@pytest.mark.parametrize(
    "err_sq, var_g, expected",
    [
        (0.0, 0.0, 0.0),
        (0.0, 2.0, 0.0),
        (3.0, 0.0, 1.0),
        (1.0, 3.0, 0.25),
    ],
)
def test_bias_variance_tradeoff(err_sq, var_g, expected):
    assert lambda_from_bias_variance(err_sq, var_g) == pytest.approx(expected)


def test_tradeoff_is_scale_invariant_and_bounded():
    assert lambda_from_bias_variance(2.0, 6.0) == pytest.approx(lambda_from_bias_variance(1.0, 3.0))
    rng = np.random.default_rng(0)
    for err_sq, var_g in rng.uniform(0.0, 10.0, size=(50, 2)):
        assert 0.0 <= lambda_from_bias_variance(err_sq, var_g) <= 1.0


def test_negative_inputs_are_rejected():
    with pytest.raises(ContractViolationError):
        lambda_from_bias_variance(-1.0, 1.0)
    with pytest.raises(ContractViolationError):
        lambda_from_bias_variance(1.0, -1.0)


@pytest.mark.parametrize("gamma, scale", [(0.99, 100.0), (0.95, 20.0)])
def test_on_policy_initial_weights(gamma, scale):
    state = _on_policy(gamma=gamma)
    np.testing.assert_allclose(state.w_err, scale)
    np.testing.assert_array_equal(state.w_sq, 0.0)
    assert initial_lambda(state, np.zeros(3), np.eye(3)[0], Regime.ON_POLICY) == 1.0


def test_off_policy_initial_weights():
    state = init_lambda_greedy(3, Regime.OFF_POLICY, 0.95, 1.0)
    np.testing.assert_array_equal(state.w_err, 0.0)
    np.testing.assert_allclose(state.w_sq, 400.0)
    assert initial_lambda(state, np.zeros(3), np.eye(3)[0], Regime.OFF_POLICY) < 1.0

    linear = init_lambda_greedy(3, Regime.OFF_POLICY, 0.95, 1.0, off_policy_init=OffPolicyInit.LINEAR)
    np.testing.assert_allclose(linear.w_sq, 20.0)


def test_undiscounted_init_is_rejected():
    with pytest.raises(ContractViolationError):
        init_lambda_greedy(3, Regime.ON_POLICY, 1.0, 1.0)


def test_first_on_policy_step_emits_one():
    state = _on_policy()
    _, lam = lambda_greedy_step(state, np.zeros(3), np.eye(3)[0], np.eye(3)[1], 0.0, 1.0, 0.95, 0.95)
    assert lam == 1.0


def test_matching_estimates_emit_zero():
    state = _on_policy()
    w_main = state.w_err.copy()
    _, lam = lambda_greedy_step(state, w_main, np.eye(3)[0], np.eye(3)[1], 0.0, 1.0, 0.95, 0.95)
    assert lam == 0.0


def test_terminal_successor_emits_zero():
    state = _on_policy()
    _, lam = lambda_greedy_step(state, np.zeros(3), np.eye(3)[0], np.zeros(3), 1.0, 1.0, 0.95, 0.0)
    assert lam == 0.0


def test_emitted_lambda_ignores_the_current_ratio():
    state = init_lambda_greedy(3, Regime.OFF_POLICY, 0.95, 1.0)
    w_main = np.array([0.3, -0.2, 0.1])
    args = (np.eye(3)[0], np.eye(3)[1], 1.0)
    _, lam_full = lambda_greedy_step(state, w_main, *args, 1.0, 0.95, 0.95)
    _, lam_half = lambda_greedy_step(state, w_main, *args, 0.5, 0.95, 0.95)
    assert lam_full == lam_half
    assert lam_full == state_lambda(state, w_main, np.eye(3)[1])


def test_step_moves_first_moment_towards_target():
    state = _on_policy()
    new, _ = lambda_greedy_step(state, np.zeros(3), np.eye(3)[0], np.eye(3)[1], 0.0, 1.0, 0.95, 0.95)
    # delta = 0.95 * 20 - 20
    assert new.w_err[0] == pytest.approx(20.0 + 0.1 * (0.95 * 20.0 - 20.0))
    assert new.w_err[1] == pytest.approx(20.0)
    np.testing.assert_allclose(new.z_g, np.eye(3)[0])


def test_greedy_run_emits_valid_lambdas():
    config = ExperimentConfig(
        chain_length=10,
        gamma_const=0.99,
        schedule=LambdaSchedule.greedy(),
        alpha=0.05,
        n_steps=2000,
        n_runs=1,
    )
    result = run_one(config, 0)
    lambdas = result.lambda_series
    assert lambdas[0] == 1.0
    assert np.all((lambdas >= 0.0) & (lambdas <= 1.0))
    # a terminal successor has no features, hence no error to trade off
    assert result.final_lambda_per_state[0] == 0.0
    assert result.final_lambda_per_state[9] == 0.0
    assert np.all(np.isfinite(result.final_lambda_per_state))


# A -> B -> A -> terminal with reward 1 on every step and no discount:
# returns 3, 2, 1, so sequential Monte-Carlo updates with step 0.5 end at A = 1.25, B = 1.0
EPISODE = [
    # x_t, x_next, gamma_t, gamma_next
    (np.eye(2)[0], np.eye(2)[1], 0.0, 1.0),
    (np.eye(2)[1], np.eye(2)[0], 1.0, 1.0),
    (np.eye(2)[0], np.zeros(2), 1.0, 0.0),
]


def _blank(trace: TraceKind) -> LambdaGreedyState:
    return LambdaGreedyState(
        w_err=np.zeros(2), z_g=np.zeros(2), vtd=init_vtd(2, 0.5, trace=trace), alpha=0.5, trace=trace
    )


def test_dutch_first_moment_ends_episode_on_monte_carlo_values():
    state = _blank(TraceKind.DUTCH)
    for x_t, x_next, gamma_t, gamma_next in EPISODE:
        state, _ = lambda_greedy_step(state, np.zeros(2), x_t, x_next, 1.0, 1.0, gamma_t, gamma_next)
    np.testing.assert_allclose(state.w_err, [1.25, 1.0])


def test_accumulating_first_moment_overshoots_on_revisits():
    state = _blank(TraceKind.ACCUMULATING)
    for x_t, x_next, gamma_t, gamma_next in EPISODE:
        state, _ = lambda_greedy_step(state, np.zeros(2), x_t, x_next, 1.0, 1.0, gamma_t, gamma_next)
    np.testing.assert_allclose(state.w_err, [1.0, 0.625])


def test_restart_cuts_the_dutch_trace():
    state = _blank(TraceKind.DUTCH)
    for x_t, x_next, gamma_t, gamma_next in EPISODE:
        state, _ = lambda_greedy_step(state, np.zeros(2), x_t, x_next, 1.0, 1.0, gamma_t, gamma_next)
    state, _ = lambda_greedy_step(state, np.zeros(2), np.eye(2)[1], np.eye(2)[0], 0.0, 1.0, 0.0, 1.0)
    np.testing.assert_allclose(state.z_g, np.eye(2)[1])


def test_adapter_reads_its_own_features():
    # main features alias both states; the adapter keeps one weight per state
    state = init_lambda_greedy(2, Regime.ON_POLICY, 0.95, 1.0, alpha=0.1)
    shared = np.ones(1)
    w_main = np.array([20.0])
    new, lam = lambda_greedy_step(
        state, w_main, shared, shared, 0.0, 1.0, 0.95, 0.95, adapter_x_t=np.eye(2)[0], adapter_x_next=np.eye(2)[1]
    )
    assert lam == 0.0
    assert new.w_err.shape == (2,)
    assert new.w_err[0] < 20.0
    assert new.w_err[1] == pytest.approx(20.0)
    assert state_lambda(new, np.array([0.0]), shared, np.eye(2)[1]) == 1.0


def test_schedule_with_adapter_features_needs_the_state_index():
    provider = ScheduleFactory(
        aliased_features(10, [(3, 8)]), adapter_features=tabular_features(10)
    ).create(LambdaSchedule.greedy())
    assert provider.state.w_err.shape == (10,)
    context = StepContext(
        w_main=np.zeros(9), x_t=np.eye(9)[4], x_next=np.eye(9)[5], reward=0.0, rho_t=1.0, gamma_t=0.99, gamma_next=0.99
    )
    with pytest.raises(MissingContextError):
        provider.next_lambda(1, 5, context)
    assert provider.next_lambda(1, 5, replace(context, s_t=4)) == 1.0


def test_lambda_falls_from_its_optimistic_start():
    config = ExperimentConfig(
        chain_length=10, gamma_const=0.99, schedule=LambdaSchedule.greedy(), alpha=0.1, n_steps=1000, n_runs=4
    )
    ctx = build_context(config)
    result = run_averaged(config, context=ctx)
    assert result.mean_lambda[0] == 1.0
    # states from the restart towards the +1 terminal are visited every episode
    assert np.all(result.final_lambda[4:8] < 1.0)
    assert typical_lambda(result.final_lambda, ctx.d, ctx.nonterminal) < 1.0
