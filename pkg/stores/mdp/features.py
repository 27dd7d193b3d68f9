import numpy as np

from helpers.errors import ContractViolationError, InvalidAliasingError
from stores.mdp.MDPModel import FeatureMap


def tabular_features(n_states: int) -> FeatureMap:
    if n_states < 1:
        raise ContractViolationError("a feature map needs at least one state")
    return FeatureMap(np.eye(n_states))


def aliased_features(n_states: int, alias_pairs: list[tuple[int, int]]) -> FeatureMap:
    """
    One-hot features where the second state of each pair reuses the first
    state's column. Remaining columns keep state order.
    """
    seen: set[int] = set()
    owner = {}
    for first, second in alias_pairs:
        if first == second:
            raise InvalidAliasingError(f"state {first} cannot be aliased with itself")
        for s in (first, second):
            if not 0 <= s < n_states:
                raise InvalidAliasingError(f"alias pair ({first}, {second}) references state {s}")
            if s in seen:
                raise InvalidAliasingError(f"state {s} appears in more than one alias pair")
            seen.add(s)
        owner[second] = first

    columns = {}
    for s in range(n_states):
        if s not in owner:
            columns[s] = len(columns)

    rows = np.zeros((n_states, len(columns)))
    for s in range(n_states):
        rows[s, columns[owner.get(s, s)]] = 1.0
    return FeatureMap(rows)
