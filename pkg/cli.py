import argparse
import logging
import sys
from pathlib import Path

import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError

from helpers.config import get_settings
from helpers.errors import AllDivergedError, ConfigError, NumericalError
from stores.experiments.ExperimentRunner import run_averaged
from stores.experiments.config_loader import apply_overrides, load_config
from stores.experiments.diagnostics import POWER_SUM_HORIZON, aliasing_wins, check_variance, oracle_moments
from stores.experiments.results_writer import write_results, write_sweep
from stores.experiments.suite import aliasing_config, ringworld_suite
from stores.experiments.sweep import sweep

logger = logging.getLogger(__name__)


def _add_run_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=None, help="base seed; run i uses seed + i")
    parser.add_argument("--out", type=str, default=None, help="output directory")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes")
    parser.add_argument("--runs", type=int, default=None, help="number of runs to average")
    parser.add_argument("--steps", type=int, default=None, help="steps per run")
    parser.add_argument("--alpha", type=float, default=None)
    parser.add_argument("--eta", type=float, default=None)
    parser.add_argument("--progress", action="store_true", help="show progress bars on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lambda-greedy-td", description="Trace adaptation experiments on ring-world")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="average runs of one config and write curves")
    run.add_argument("config")
    _add_run_flags(run)

    sweep_cmd = sub.add_parser("sweep", help="grid search over alpha and eta")
    sweep_cmd.add_argument("config")
    sweep_cmd.add_argument("--alpha-grid", type=float, nargs="+", default=None)
    sweep_cmd.add_argument("--eta-grid", type=float, nargs="+", default=None)
    _add_run_flags(sweep_cmd)

    suite = sub.add_parser("suite", help="every ring-world config crossed with every schedule")
    suite.add_argument("--sizes", type=int, nargs="+", default=[10, 25, 50])
    suite.add_argument("--sweep", action="store_true", help="sweep alpha and eta for each config")
    _add_run_flags(suite)

    oracle = sub.add_parser("oracle", help="print exact moments and the stationary distribution")
    oracle.add_argument("config")

    check = sub.add_parser("check-variance", help="finite-variance check of the squared return")
    check.add_argument("config")

    aliasing = sub.add_parser("aliasing", help="greedy lambda with one aliased state pair")
    _add_run_flags(aliasing)

    return parser


def _overrides(args) -> dict:
    return dict(base_seed=args.seed, n_runs=args.runs, n_steps=args.steps, alpha=args.alpha, eta=args.eta)


def _jobs(args, settings) -> int:
    return args.jobs if args.jobs is not None else settings.DEFAULT_JOBS


def _out_dir(args, settings, label: str) -> Path:
    return Path(args.out) if args.out is not None else Path(settings.OUTPUT_DIR) / label


def cmd_run(args, settings) -> int:
    config = apply_overrides(load_config(args.config), **_overrides(args))
    result = run_averaged(config, jobs=_jobs(args, settings), progress=args.progress or settings.SHOW_PROGRESS)
    out = write_results(result, config, _out_dir(args, settings, config.label))
    print(f"{config.label}: final mean error {result.mean_error[-1]:.6g} -> {out}")
    return 0


def cmd_sweep(args, settings) -> int:
    config = apply_overrides(load_config(args.config), **_overrides(args))
    result = sweep(
        config,
        alpha_grid=args.alpha_grid,
        eta_grid=args.eta_grid,
        jobs=_jobs(args, settings),
        progress=args.progress or settings.SHOW_PROGRESS,
    )
    out = write_sweep(result, config, _out_dir(args, settings, config.label))
    print(f"{config.label}: best alpha={result.best_alpha:g} eta={result.best_eta:g} score={result.best_score:.6g} -> {out}")
    return 0


def cmd_suite(args, settings) -> int:
    common = {key: value for key, value in _overrides(args).items() if value is not None}
    common.setdefault("base_seed", settings.DEFAULT_SEED)
    root = Path(args.out) if args.out is not None else Path(settings.OUTPUT_DIR)
    progress = args.progress or settings.SHOW_PROGRESS
    for config in ringworld_suite(sizes=tuple(args.sizes), **common):
        out = root / config.label
        if args.sweep:
            write_sweep(sweep(config, jobs=_jobs(args, settings), progress=progress), config, out)
        else:
            write_results(run_averaged(config, jobs=_jobs(args, settings), progress=progress), config, out)
        print(f"{config.label} -> {out}")
    return 0


def cmd_oracle(args, settings) -> int:
    ctx, exact = oracle_moments(load_config(args.config))
    print("state,v,m2,variance,d")
    for s in range(ctx.model.n_states):
        print(f"{s},{exact.v[s]:.10g},{exact.m2[s]:.10g},{exact.reported_variance[s]:.10g},{ctx.d[s]:.10g}")
    return 0


def cmd_check_variance(args, settings) -> int:
    report, tail = check_variance(load_config(args.config))
    print(f"sigma_max={report.max_singular_value:.10g}")
    print(f"spectral_radius={report.spectral_radius:.10g}")
    print(f"power_sum_T{POWER_SUM_HORIZON}_max={tail:.10g}")
    print("PASS" if report.passes else "FAIL")
    return 0


def cmd_aliasing(args, settings) -> int:
    overrides = {key: value for key, value in _overrides(args).items() if value is not None}
    config = aliasing_config(**overrides)
    result = run_averaged(config, jobs=_jobs(args, settings), progress=args.progress or settings.SHOW_PROGRESS)
    out = write_results(result, config, _out_dir(args, settings, config.label))

    aliased = sorted({s for pair in config.alias_pairs for s in pair})
    others = [s for s in range(1, config.chain_length - 1) if s not in aliased]
    wins = aliasing_wins(result.final_lambda_runs, aliased, others)
    print(f"mean final lambda, aliased states {aliased}: {np.mean(result.final_lambda[aliased]):.6g}")
    print(f"mean final lambda, other states: {np.mean(result.final_lambda[others]):.6g}")
    print(f"runs with higher lambda on the aliased states: {wins}/{result.n_runs}")
    print(f"-> {out}")
    return 0


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "suite": cmd_suite,
    "oracle": cmd_oracle,
    "check-variance": cmd_check_variance,
    "aliasing": cmd_aliasing,
}


def cli(argv: list[str] | None = None) -> int:
    load_dotenv()
    settings = get_settings()
    logging.basicConfig(level=settings.LOG_LEVEL)

    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, settings)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except ValidationError as exc:
        # configs built from flags rather than a file
        first = exc.errors()[0]
        print(f"<flags>: {'.'.join(str(p) for p in first['loc']) or 'config'}: {first['msg']}", file=sys.stderr)
        return 2
    except (NumericalError, AllDivergedError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(cli())
