import os
import logging

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.concurrency import run_in_threadpool

from helpers.config import get_settings
from helpers.errors import ContractViolationError, NumericalError
from stores.experiments.ExperimentConfig import ExperimentConfig
from stores.experiments.ExperimentRunner import run_averaged
from stores.experiments.diagnostics import check_variance as variance_report
from stores.experiments.diagnostics import oracle_moments

logger = logging.getLogger(__name__)

settings = get_settings()
app = FastAPI(title=settings.APP_NAME, version=settings.APP_VERSION)


def _finite_or_none(values) -> list:
    # json has no infinity; diverged steps come back as null
    return [float(x) if np.isfinite(x) else None for x in values]


def _oracle(config: ExperimentConfig) -> dict:
    ctx, exact = oracle_moments(config)
    return {
        "label": config.label,
        "v": exact.v.tolist(),
        "m2": exact.m2.tolist(),
        "variance": exact.reported_variance.tolist(),
        "d": ctx.d.tolist(),
    }


def _check_variance(config: ExperimentConfig) -> dict:
    report, tail = variance_report(config)
    return {
        "passes": bool(report.passes),
        "max_singular_value": report.max_singular_value,
        "spectral_radius": report.spectral_radius,
        "power_sum_max": tail if np.isfinite(tail) else None,
    }


def _run(config: ExperimentConfig) -> dict:
    result = run_averaged(config, jobs=1)
    return {
        "label": config.label,
        "seeds": result.seeds,
        "diverged_runs": result.diverged_runs,
        "mean_error": _finite_or_none(result.mean_error),
        "mean_lambda": _finite_or_none(result.mean_lambda),
        "final_lambda": _finite_or_none(result.final_lambda),
    }


async def _call(fn, config: ExperimentConfig) -> dict:
    try:
        return await run_in_threadpool(fn, config)
    except (NumericalError, ContractViolationError) as exc:
        logger.error("%s failed for %s: %s", fn.__name__, config.label, exc)
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/oracle")
async def oracle(config: ExperimentConfig):
    """
    Exact value, second moment, variance and stationary distribution per state.
    """
    return await _call(_oracle, config)


@app.post("/check-variance")
async def check_variance(config: ExperimentConfig):
    return await _call(_check_variance, config)


@app.post("/run")
async def run(config: ExperimentConfig):
    """
    Average the config's runs in-process and return the curves; keep n_runs
    and n_steps small.
    """
    return await _call(_run, config)


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("server:app", host="0.0.0.0", port=int(os.getenv("PORT", 8000)), reload=True)
