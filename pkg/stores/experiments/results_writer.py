import csv
import json
import logging
from pathlib import Path

from helpers.config import get_settings
from stores.experiments.ExperimentConfig import ExperimentConfig
from stores.experiments.ExperimentRunner import AveragedResult
from stores.experiments.sweep import SweepResult

logger = logging.getLogger(__name__)

ERRORS_FILE = "errors.csv"
FINAL_LAMBDA_FILE = "final_lambda.csv"
MANIFEST_FILE = "manifest.json"
SWEEP_FILE = "sweep.csv"

ERRORS_HEADER = ["step", "mean_error", "stderr_error", "mean_lambda"]
FINAL_LAMBDA_HEADER = ["state", "final_lambda"]
SWEEP_HEADER = ["alpha", "eta", "score"]


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_manifest(path: Path, payload: dict) -> None:
    settings = get_settings()
    payload = {"app": settings.APP_NAME, "version": settings.APP_VERSION, **payload}
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(payload, sort_keys=True, indent=4))
        f.write("\n")


def write_results(result: AveragedResult, config: ExperimentConfig, path: str | Path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)

    _write_csv(
        out / ERRORS_FILE,
        ERRORS_HEADER,
        (
            [t, _fmt(result.mean_error[t]), _fmt(result.stderr_error[t]), _fmt(result.mean_lambda[t])]
            for t in range(len(result.mean_error))
        ),
    )
    _write_csv(
        out / FINAL_LAMBDA_FILE,
        FINAL_LAMBDA_HEADER,
        ([s, _fmt(value)] for s, value in enumerate(result.final_lambda)),
    )
    _write_manifest(
        out / MANIFEST_FILE,
        {
            "label": config.label,
            "config": config.model_dump(mode="json"),
            "seeds": list(result.seeds),
            "diverged_runs": int(result.diverged_runs),
        },
    )
    logger.info("Wrote results for %s to %s", config.label, out)
    return out


def write_sweep(result: SweepResult, config: ExperimentConfig, path: str | Path) -> Path:
    """Score grid plus the best cell's curves, written like a single run."""
    out = Path(path)
    best_config = ExperimentConfig.model_validate(
        {**config.model_dump(mode="json"), "alpha": result.best_alpha, "eta": result.best_eta}
    )
    write_results(result.best_result, best_config, out)
    _write_csv(
        out / SWEEP_FILE,
        SWEEP_HEADER,
        (
            [_fmt(alpha), _fmt(eta), _fmt(result.scores[i, j])]
            for i, alpha in enumerate(result.alpha_grid)
            for j, eta in enumerate(result.eta_grid)
        ),
    )
    return out


def read_manifest(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_FILE
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    return ExperimentConfig.model_validate(data["config"])
