import numpy as np
import pytest

from stores.experiments.diagnostics import aliasing_wins, collapse_statistic, typical_lambda, weighted_median


@pytest.mark.parametrize(
    "values, weights, expected",
    [
        ([3.0, 1.0, 2.0], [1.0, 1.0, 1.0], 2.0),
        ([0.9, 0.1, 0.5], [0.1, 0.8, 0.1], 0.1),
        ([0.9, 0.1], [0.5, 0.5], 0.1),
        ([0.9, 0.1], [0.6, 0.4], 0.9),
    ],
)
def test_weighted_median(values, weights, expected):
    assert weighted_median(np.array(values), np.array(weights)) == expected


def test_weighted_median_of_nothing_is_nan():
    assert np.isnan(weighted_median(np.array([]), np.array([])))
    assert np.isnan(weighted_median(np.array([1.0]), np.array([0.0])))


def test_typical_lambda_ignores_terminals_and_rare_states():
    final = np.array([0.0, 1.0, 1.0, 0.1, 0.2, 0.0])
    d = np.array([0.2, 0.01, 0.01, 0.4, 0.2, 0.18])
    nonterminal = np.array([False, True, True, True, True, False])
    assert typical_lambda(final, d, nonterminal) == 0.1


def test_collapse_statistic_skips_diverged_runs():
    d = np.full(4, 0.25)
    nonterminal = np.array([False, True, True, False])
    runs = np.array([[0.0, 0.1, 0.1, 0.0], [0.0, 0.3, 0.3, 0.0], [np.nan] * 4])
    assert collapse_statistic(runs, d, nonterminal) == pytest.approx(0.2)
    assert np.isnan(collapse_statistic(runs[2:], d, nonterminal))


def test_aliasing_wins_counts_runs():
    runs = np.array(
        [
            [0.0, 0.1, 0.9, 0.1, 0.0],
            [0.0, 0.5, 0.2, 0.5, 0.0],
            [0.0, 0.2, 0.6, 0.2, 0.0],
        ]
    )
    assert aliasing_wins(runs, aliased=[2], others=[1, 3]) == 2
