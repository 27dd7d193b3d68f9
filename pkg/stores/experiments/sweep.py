import logging
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from helpers.errors import AllDivergedError, ContractViolationError
from stores.experiments.ExperimentConfig import ExperimentConfig, SweepCriterion
from stores.experiments.ExperimentRunner import AveragedResult, build_context, run_averaged

logger = logging.getLogger(__name__)

ALPHA_EXPONENTS = range(-6, 7)
ETA_EXPONENTS = (-16, -8, -4, -2, -1, 0, 1, 2, 4, 8, 16)


def default_alpha_grid() -> list[float]:
    return [0.1 * 2.0**j for j in ALPHA_EXPONENTS]


def default_eta_grid() -> list[float]:
    return [2.0**j for j in ETA_EXPONENTS]


@dataclass(frozen=True)
class SweepResult:
    alpha_grid: list[float]
    eta_grid: list[float]
    scores: np.ndarray  # (len(alpha_grid), len(eta_grid)), +inf where a run diverged
    best_alpha: float
    best_eta: float
    best_score: float
    best_result: AveragedResult

    @property
    def best_cell(self) -> tuple[float, float]:
        return self.best_alpha, self.best_eta


def score(result: AveragedResult, criterion: SweepCriterion) -> float:
    if result.diverged_runs or len(result.mean_error) == 0:
        return float("inf")
    if criterion is SweepCriterion.FINAL:
        return float(result.mean_error[-1])
    return float(np.mean(result.mean_error))


def sweep(
    config_template: ExperimentConfig,
    alpha_grid: list[float] | None = None,
    eta_grid: list[float] | None = None,
    jobs: int = 1,
    progress: bool = False,
) -> SweepResult:
    """
    Average every (alpha, eta) cell over the template's runs and keep the
    cell with the lowest score. Ties go to the first cell in grid order.
    """
    alpha_grid = list(default_alpha_grid() if alpha_grid is None else alpha_grid)
    eta_grid = list(default_eta_grid() if eta_grid is None else eta_grid)
    if not alpha_grid or not eta_grid:
        raise ContractViolationError("sweep grids must be nonempty")

    context = build_context(config_template)
    scores = np.full((len(alpha_grid), len(eta_grid)), np.inf)
    best: tuple[float, int, int, AveragedResult] | None = None

    cells = [(i, j) for i in range(len(alpha_grid)) for j in range(len(eta_grid))]
    for i, j in tqdm(cells, desc=f"sweep {config_template.label}", disable=not progress):
        data = config_template.model_dump(mode="json")
        data.update(alpha=alpha_grid[i], eta=eta_grid[j])
        config = ExperimentConfig.model_validate(data)
        result = run_averaged(config, jobs=jobs, context=context)
        scores[i, j] = score(result, config_template.sweep_criterion)
        if np.isfinite(scores[i, j]) and (best is None or scores[i, j] < best[0]):
            best = (scores[i, j], i, j, result)

    if best is None:
        raise AllDivergedError(f"every cell of the sweep for {config_template.label} diverged")

    best_score, i, j, result = best
    logger.info(
        "%s: best alpha=%g eta=%g score=%.5f", config_template.label, alpha_grid[i], eta_grid[j], best_score
    )
    return SweepResult(
        alpha_grid=alpha_grid,
        eta_grid=eta_grid,
        scores=scores,
        best_alpha=alpha_grid[i],
        best_eta=eta_grid[j],
        best_score=float(best_score),
        best_result=result,
    )
