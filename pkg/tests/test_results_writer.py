from pathlib import Path

import numpy as np

from stores.experiments.ExperimentConfig import ExperimentConfig
from stores.experiments.ExperimentRunner import AveragedResult, run_averaged
from stores.experiments.results_writer import (
    ERRORS_FILE,
    FINAL_LAMBDA_FILE,
    MANIFEST_FILE,
    SWEEP_FILE,
    read_manifest,
    write_results,
    write_sweep,
)
from stores.experiments.sweep import sweep
from stores.schedules.LambdaSchedule import LambdaSchedule


def _config() -> ExperimentConfig:
    return ExperimentConfig(chain_length=10, schedule=LambdaSchedule.decay(10), n_steps=40, n_runs=2, base_seed=3)


def test_files_and_headers(tmp_path):
    config = _config()
    out = write_results(run_averaged(config), config, tmp_path / "run")

    errors = (out / ERRORS_FILE).read_text().splitlines()
    assert errors[0] == "step,mean_error,stderr_error,mean_lambda"
    assert len(errors) == 41
    assert errors[1].startswith("0,")

    finals = (out / FINAL_LAMBDA_FILE).read_text().splitlines()
    assert finals[0] == "state,final_lambda"
    assert len(finals) == 11


def test_manifest_round_trip(tmp_path):
    config = _config()
    out = write_results(run_averaged(config), config, tmp_path)
    assert read_manifest(out) == config
    assert read_manifest(out / MANIFEST_FILE) == config


def test_output_is_byte_stable(tmp_path):
    config = _config()
    first = write_results(run_averaged(config), config, tmp_path / "a")
    second = write_results(run_averaged(config), config, tmp_path / "b")
    for name in (ERRORS_FILE, FINAL_LAMBDA_FILE, MANIFEST_FILE):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_empty_result_writes_headers_only(tmp_path):
    empty = AveragedResult(
        mean_error=np.array([]),
        stderr_error=np.array([]),
        mean_lambda=np.array([]),
        final_lambda=np.array([]),
        seeds=[],
        diverged_runs=0,
    )
    out = write_results(empty, _config(), tmp_path)
    assert (out / ERRORS_FILE).read_text() == "step,mean_error,stderr_error,mean_lambda\n"
    assert (out / FINAL_LAMBDA_FILE).read_text() == "state,final_lambda\n"


def test_sweep_output(tmp_path):
    config = _config()
    result = sweep(config, alpha_grid=[0.05, 0.1], eta_grid=[1.0, 2.0])
    out = write_sweep(result, config, tmp_path)
    rows = (out / SWEEP_FILE).read_text().splitlines()
    assert rows[0] == "alpha,eta,score"
    assert len(rows) == 5
    manifest = read_manifest(out)
    assert (manifest.alpha, manifest.eta) == result.best_cell


GOLDEN = Path(__file__).parent / "golden" / "ring10_decay"


def test_pinned_seed_output_matches_golden_files(tmp_path, monkeypatch):
    # no learning and no discount: errors are mean |r_pi| and lambda follows the decay
    monkeypatch.setenv("APP_NAME", "lambda-greedy-td")
    monkeypatch.setenv("APP_VERSION", "0.1.0")
    config = ExperimentConfig(
        chain_length=10,
        gamma_const=0.0,
        alpha=0.0,
        schedule=LambdaSchedule.decay(10),
        n_steps=4,
        n_runs=2,
        base_seed=7,
    )
    out = write_results(run_averaged(config), config, tmp_path)
    for name in (ERRORS_FILE, FINAL_LAMBDA_FILE, MANIFEST_FILE):
        assert (out / name).read_text(encoding="utf-8") == (GOLDEN / name).read_text(encoding="utf-8"), name
