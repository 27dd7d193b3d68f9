from dataclasses import dataclass, field

import numpy as np

from helpers.errors import ContractViolationError

PROB_TOL = 1e-12


def _frozen(array) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class MDPModel:
    """
    Tabular model with P[s][a][s'], R[s][a][s'], terminal markers and the
    state the stream restarts from after termination.
    """

    transition: np.ndarray
    reward: np.ndarray
    terminal: np.ndarray
    restart_state: int

    def __post_init__(self):
        object.__setattr__(self, "transition", _frozen(self.transition))
        object.__setattr__(self, "reward", _frozen(self.reward))
        terminal = np.array(self.terminal, dtype=bool)
        terminal.setflags(write=False)
        object.__setattr__(self, "terminal", terminal)

        P = self.transition
        if P.ndim != 3 or P.shape[0] != P.shape[2]:
            raise ContractViolationError(f"transition must be (S, A, S), got {P.shape}")
        if self.reward.shape != P.shape:
            raise ContractViolationError("reward must have the same shape as transition")
        if terminal.shape != (P.shape[0],):
            raise ContractViolationError("terminal must have one flag per state")
        if np.any(P < 0.0) or np.any(P > 1.0):
            raise ContractViolationError("transition probabilities must lie in [0, 1]")
        if np.max(np.abs(P.sum(axis=2) - 1.0)) > PROB_TOL:
            raise ContractViolationError("every P[s][a] must sum to 1")
        if not 0 <= self.restart_state < P.shape[0] or terminal[self.restart_state]:
            raise ContractViolationError("restart_state must be a valid non-terminal state")

    @property
    def n_states(self) -> int:
        return self.transition.shape[0]

    @property
    def n_actions(self) -> int:
        return self.transition.shape[1]


@dataclass(frozen=True)
class StateFn:
    """A per-state value in [0, 1]; holds gamma(s), lambda(s) and lambda_bar(s)."""

    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 1:
            raise ContractViolationError("StateFn values must be one-dimensional")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise ContractViolationError("StateFn entries must lie in [0, 1]")
        object.__setattr__(self, "values", values)

    def __getitem__(self, s: int) -> float:
        return float(self.values[s])

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Policy:
    probs: np.ndarray

    def __post_init__(self):
        probs = _frozen(self.probs)
        if probs.ndim != 2:
            raise ContractViolationError("policy must be an (S, A) matrix")
        if np.any(probs < 0.0) or np.any(probs > 1.0):
            raise ContractViolationError("policy probabilities must lie in [0, 1]")
        if np.max(np.abs(probs.sum(axis=1) - 1.0)) > PROB_TOL:
            raise ContractViolationError("policy rows must sum to 1")
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, index):
        return self.probs[index]


@dataclass(frozen=True)
class FeatureMap:
    rows: np.ndarray
    n_features: int = field(init=False)

    def __post_init__(self):
        rows = _frozen(self.rows)
        if rows.ndim != 2:
            raise ContractViolationError("feature rows must form an (S, n_features) matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "n_features", rows.shape[1])

    @property
    def n_states(self) -> int:
        return self.rows.shape[0]

    def __call__(self, s: int) -> np.ndarray:
        return self.rows[s]

    def masked(self, terminal: np.ndarray) -> "FeatureMap":
        """Same map with terminal states sent to the zero vector."""
        rows = np.array(self.rows)
        rows[np.asarray(terminal, dtype=bool)] = 0.0
        return FeatureMap(rows)


@dataclass(frozen=True)
class Transition:
    s: int
    a: int
    s_next: int
    reward: float
    terminated: bool
