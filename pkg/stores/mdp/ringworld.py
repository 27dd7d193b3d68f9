import logging

import numpy as np

from helpers.errors import ContractViolationError, CoverageError, InvalidSizeError
from helpers.random_stream import RandomStream
from stores.mdp.MDPEnums import Action
from stores.mdp.MDPModel import MDPModel, Policy, StateFn, Transition

logger = logging.getLogger(__name__)

MIN_RING_SIZE = 4
TARGET_RIGHT_PROB = 0.95


def ring_policy(n: int, right_prob: float) -> Policy:
    probs = np.empty((n, len(Action)))
    probs[:, Action.RIGHT] = right_prob
    probs[:, Action.LEFT] = 1.0 - right_prob
    return Policy(probs)


def build_ringworld(n: int, target_right: float = TARGET_RIGHT_PROB) -> tuple[MDPModel, Policy]:
    """
    Ring of n states with two adjoining terminal states.

    State 0 is the -1 terminal (entered leftward from state 1) and state n-1
    is the +1 terminal (entered rightward from state n-2). Every other reward
    is zero. Terminal rows teleport to the restart state with reward 0, which
    is floor((n-2)/2) steps from the -1 terminal.
    """
    if n < MIN_RING_SIZE:
        raise InvalidSizeError(f"ring-world needs at least {MIN_RING_SIZE} states, got {n}")

    minus_terminal, plus_terminal = 0, n - 1
    restart = (n - 2) // 2

    transition = np.zeros((n, len(Action), n))
    reward = np.zeros((n, len(Action), n))
    terminal = np.zeros(n, dtype=bool)
    terminal[[minus_terminal, plus_terminal]] = True

    for s in range(n):
        if terminal[s]:
            transition[s, :, restart] = 1.0
            continue
        transition[s, Action.RIGHT, (s + 1) % n] = 1.0
        transition[s, Action.LEFT, (s - 1) % n] = 1.0

    # rewards depend on the entered state only
    reward[:, :, plus_terminal] = 1.0
    reward[:, :, minus_terminal] = -1.0
    reward[terminal] = 0.0

    model = MDPModel(transition=transition, reward=reward, terminal=terminal, restart_state=restart)
    return model, ring_policy(n, target_right)


def discount_fn(model: MDPModel, gamma_const: float) -> StateFn:
    """Constant discount on non-terminal states, zero on terminals."""
    values = np.full(model.n_states, float(gamma_const))
    values[model.terminal] = 0.0
    return StateFn(values)


def constant_fn(n_states: int, value: float) -> StateFn:
    return StateFn(np.full(n_states, float(value)))


def sample_step(model: MDPModel, policy: Policy, s: int, rng: RandomStream) -> Transition:
    if model.terminal[s]:
        raise ContractViolationError(f"cannot sample from terminal state {s}; teleport first")
    a = rng.categorical(policy.probs[s])
    s_next = rng.categorical(model.transition[s, a])
    return Transition(
        s=s,
        a=a,
        s_next=s_next,
        reward=float(model.reward[s, a, s_next]),
        terminated=bool(model.terminal[s_next]),
    )


def importance_ratio(target: Policy, behavior: Policy, s: int, a: int) -> float:
    mu = behavior.probs[s, a]
    if mu <= 0.0:
        raise CoverageError(f"behaviour policy never takes action {a} in state {s}")
    return float(target.probs[s, a] / mu)


def ratio_matrix(target: Policy, behavior: Policy) -> np.ndarray:
    """rho(s, a) for every pair; zero where both policies are zero."""
    needed = target.probs > 0.0
    if np.any(needed & (behavior.probs <= 0.0)):
        raise CoverageError("behaviour policy does not cover the target policy")
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = np.where(behavior.probs > 0.0, target.probs / behavior.probs, 0.0)
    return rho
