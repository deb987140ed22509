"""
Experiment orchestration: runs every (solver, seed) pair of a config and
writes trajectory, summary, aggregate and metadata files.

NO MCP DEPENDENCIES - used by the CLI and wrapped by the MCP tools.
"""

import csv
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from importlib import metadata as importlib_metadata
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..baselines.minibatch_sqp import run_minibatch_sqp
from ..baselines.sto_subgrad_vr import run_sto_subgrad_vr
from ..errors import ConfigError, InsufficientRuns, RankDeficientJacobian, SvrSqpError
from ..gradients.sampling import RandomStreams, Stream
from ..linalg.kkt_solver import least_squares_multipliers
from ..metrics.metrics_service import aggregate, aggregate_trajectories, select_best
from ..models.harness_data import DatasetSummary, ExperimentResult, RunProgress, RunResult, SeedSetup
from ..models.metrics_data import TRAJECTORY_HEADER, MetricSummary, RunLog, TrajectoryPoint
from ..models.problem_data import Dataset
from ..models.solver_data import AdaptiveStep, ConstantStep, SqpSettings, StepRule, SubgradSettings
from ..problems.constraints import Constraint, L2BallConstraint, make_linear_constraints
from ..problems.dataset_service import DatasetService
from ..problems.problem import Problem, build_logistic_problem, estimate_lipschitz
from ..sqp.svr_sqp_service import run_svr_sqp
from .experiment_config import (
    ExperimentConfig,
    L2BallConstraintConfig,
    MinibatchSqpConfig,
    SolverConfig,
    StoSubgradVrConfig,
    SvrSqpAdaptiveConfig,
    SvrSqpConstantConfig,
)

logger = logging.getLogger(__name__)

SUMMARY_HEADER = ("solver", "seed", "best_feasibility", "best_stationarity", "wall_seconds")
AGGREGATE_HEADER = ("solver", "metric", "mean", "halfwidth95", "median", "runs")
TRAJECTORY_MEAN_HEADER = (
    "index",
    "epoch",
    "feasibility_mean",
    "feasibility_halfwidth95",
    "stationarity_mean",
    "stationarity_halfwidth95",
)


def _get_default_out_dir() -> Path:
    """Get output directory, checking SVRSQP_OUT_DIR env var first."""
    if env_out := os.environ.get("SVRSQP_OUT_DIR"):
        return Path(env_out).expanduser()
    return Path.cwd() / "results"


def format_value(value) -> str:
    """Shortest round-trip text for floats, plain text for everything else."""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def write_trajectory(path: Path, log: RunLog) -> Path:
    return _write_csv(path, TRAJECTORY_HEADER, (r.as_row() for r in log.records))


def write_trajectory_mean(path: Path, points: Sequence[TrajectoryPoint]) -> Path:
    rows = (
        (
            p.index,
            p.epoch,
            p.feasibility_mean,
            p.feasibility_halfwidth95,
            p.stationarity_mean,
            p.stationarity_halfwidth95,
        )
        for p in points
    )
    return _write_csv(path, TRAJECTORY_MEAN_HEADER, rows)


def _package_version() -> str:
    try:
        return importlib_metadata.version("svr-sqp")
    except importlib_metadata.PackageNotFoundError:
        return "0+unknown"


def initial_point(n: int, scale: float, streams: RandomStreams) -> np.ndarray:
    """Standard normal vector rescaled to norm `scale`, from the INIT stream."""
    x0 = streams.generator(Stream.INIT).standard_normal(n)
    return x0 * (scale / np.linalg.norm(x0))


def check_constraint_dims(config: ExperimentConfig, n: int) -> None:
    cfg = config.constraint
    if not isinstance(cfg, L2BallConstraintConfig) and not cfg.m < n:
        raise ConfigError("constraint.m", f"must be smaller than n={n}, got {cfg.m}")


def make_constraint(config: ExperimentConfig, n: int, seed: int) -> Constraint:
    """Constraint of the run with this seed.

    Linear constraint data comes from the dedicated constraint seed, so every
    run of an experiment shares (A, a₁), unless resample_constraints is set.
    """
    cfg = config.constraint
    if isinstance(cfg, L2BallConstraintConfig):
        return L2BallConstraint(a2=cfg.a2)
    check_constraint_dims(config, n)
    data_seed = seed if config.experiment.resample_constraints else config.experiment.constraint_seed
    return make_linear_constraints(n, cfg.m, RandomStreams(data_seed).generator(Stream.CONSTRAINTS))


def step_rule(solver: SolverConfig, setup: SeedSetup, gamma: float) -> StepRule:
    """Constant or adaptive step rule of an SQP-type solver."""
    if isinstance(solver, SvrSqpConstantConfig):
        return ConstantStep(alpha=solver.alpha)
    if isinstance(solver, MinibatchSqpConfig) and solver.alpha is not None:
        return ConstantStep(alpha=solver.alpha)
    if isinstance(solver, (SvrSqpAdaptiveConfig, MinibatchSqpConfig)):
        return AdaptiveStep(beta=solver.beta, alpha_u=solver.alpha_u, lipschitz=setup.lipschitz, gamma=gamma)
    raise TypeError(f"{solver.kind} has no SQP step rule")


class ExperimentService:
    """
    Main service for running experiments.

    Handles:
    - Loading the dataset (through the dataset cache)
    - Per-seed setup: constraint data, x₀, L estimate, y₀
    - Running all (solver, seed) pairs, optionally on a thread pool
    - Writing CSV outputs and metadata
    """

    def __init__(self, dataset_service: Optional[DatasetService] = None):
        """Initialize the experiment service.

        Args:
            dataset_service: DatasetService instance. Creates a cached one if not provided.
        """
        self._datasets = dataset_service or DatasetService()

    def load_dataset(self, config: ExperimentConfig) -> Dataset:
        """Load the config's dataset.

        Raises:
            ConfigError: If the dataset file does not exist
        """
        try:
            return self._datasets.load(
                config.experiment.dataset,
                n_features=config.experiment.n_features,
                use_cache=config.experiment.use_cache,
            )
        except FileNotFoundError as e:
            raise ConfigError("experiment.dataset", str(e)) from e

    def dataset_info(self, path: Path, n_features: Optional[int] = None) -> DatasetSummary:
        return DatasetSummary.of(self._datasets.load(path, n_features=n_features))

    def validate(self, config: ExperimentConfig) -> dict:
        """Resolve N-dependent parameters against the dataset; returns them for display."""
        dataset = self.load_dataset(config)
        check_constraint_dims(config, dataset.num_features)
        resolved = config.resolved(dataset.num_samples)
        resolved["dataset"] = {"N": dataset.num_samples, "n": dataset.num_features}
        return resolved

    def setup_seed(self, config: ExperimentConfig, problem: Problem, seed: int) -> SeedSetup:
        """x₀, the Lipschitz estimate and least-squares y₀ for one seed."""
        streams = RandomStreams(seed)
        x0 = initial_point(problem.n, config.experiment.init_scale, streams)
        lipschitz = estimate_lipschitz(problem, x0, streams.generator(Stream.LIPSCHITZ))

        y0 = None
        try:
            y0 = least_squares_multipliers(problem.jacobian(x0), problem.full_gradient(x0))
        except RankDeficientJacobian as e:
            logger.warning(f"seed {seed}: no least-squares multipliers at x0: {e}")
        return SeedSetup(seed=seed, x0=x0, lipschitz=lipschitz, y0=y0)

    def run_one(
        self,
        config: ExperimentConfig,
        problem: Problem,
        solver: SolverConfig,
        setup: SeedSetup,
    ) -> RunResult:
        """Run one solver on one seed.

        Raises:
            SvrSqpError: With solver and seed attached
        """
        exp = config.experiment
        b = config.batch_size_for(solver, problem.N)
        S = config.inner_length_for(solver, problem.N)
        streams = RandomStreams(setup.seed)

        start = time.perf_counter()
        if isinstance(solver, StoSubgradVrConfig):
            settings = SubgradSettings(
                x_init=setup.x0,
                alpha=solver.alpha,
                tau=solver.tau,
                lipschitz=setup.lipschitz,
                gamma=problem.gamma,
                batch_size=b,
                inner_length=S,
                epochs=exp.epochs,
                sampling=exp.sampling,
                cache_reference_gradients=exp.cache_reference_gradients,
            )
            log = run_sto_subgrad_vr(problem, settings, streams, label=solver.name)
        else:
            sqp_settings = SqpSettings(
                x_init=setup.x0,
                step=step_rule(solver, setup, problem.gamma),
                batch_size=b,
                inner_length=S,
                epochs=exp.epochs,
                tau_init=exp.tau_init,
                sigma=exp.sigma,
                eps_tau=exp.eps_tau,
                sampling=exp.sampling,
                cache_reference_gradients=exp.cache_reference_gradients,
                check_invariants=exp.check_invariants,
            )
            if isinstance(solver, MinibatchSqpConfig):
                log = run_minibatch_sqp(problem, sqp_settings, streams, label=solver.name)
            else:
                log = run_svr_sqp(problem, sqp_settings, streams, label=solver.name)
        wall = time.perf_counter() - start

        return RunResult(
            solver=solver.name,
            seed=setup.seed,
            log=log,
            best=select_best(log.records),
            wall_seconds=wall,
            batch_size=b,
            inner_length=S,
        )

    def run(
        self,
        config: ExperimentConfig,
        out_dir: Optional[Path] = None,
        seeds: Optional[List[int]] = None,
        threads: Optional[int] = None,
        progress: Optional[RunProgress] = None,
    ) -> ExperimentResult:
        """Run the experiment and write its files.

        Args:
            config: Validated experiment config
            out_dir: Overrides config.experiment.out_dir and SVRSQP_OUT_DIR
            seeds: Overrides config.experiment.seeds
            threads: Overrides config.experiment.threads; 1 runs sequentially
            progress: Optional callback after each finished run

        Returns:
            ExperimentResult with output paths and aggregate tables

        Raises:
            ConfigError: If the dataset or N-dependent parameters are invalid
            SvrSqpError: From a solver, with solver and seed attached
        """
        out_dir = Path(out_dir or config.experiment.out_dir or _get_default_out_dir())
        seeds = list(seeds if seeds is not None else config.experiment.seeds)
        threads = threads or config.experiment.threads
        created = datetime.now(timezone.utc)

        dataset = self.load_dataset(config)
        resolved = config.resolved(dataset.num_samples)

        problems: Dict[int, Problem] = {}
        setups: Dict[int, SeedSetup] = {}
        for seed in seeds:
            if config.experiment.resample_constraints or not problems:
                problem = build_logistic_problem(dataset, make_constraint(config, dataset.num_features, seed))
            problems[seed] = problem
            setups[seed] = self.setup_seed(config, problem, seed)

        jobs: List[Tuple[SolverConfig, int]] = [(solver, seed) for solver in config.solvers for seed in seeds]
        logger.info(f"Running {len(jobs)} runs on {threads} thread(s), writing to {out_dir}")

        def work(job: Tuple[SolverConfig, int]) -> RunResult:
            solver, seed = job
            try:
                return self.run_one(config, problems[seed], solver, setups[seed])
            except SvrSqpError as e:
                raise e.attach(solver=solver.name, seed=seed)

        results = self._execute(jobs, work, threads, progress)

        result = ExperimentResult(
            out_dir=out_dir,
            summary_file=out_dir / "summary.csv",
            metadata_file=out_dir / "metadata.json",
            runs=results,
        )
        for run in results:
            path = out_dir / "trajectories" / f"{run.solver}_seed{run.seed}.csv"
            result.trajectory_files.append(write_trajectory(path, run.log))

        _write_csv(
            result.summary_file,
            SUMMARY_HEADER,
            (
                (r.solver, r.seed, r.best.feasibility_inf, r.best.stationarity_inf, round(r.wall_seconds, 6))
                for r in results
            ),
        )

        self._write_aggregates(config, results, result)
        self._write_metadata(config, dataset, problems, setups, resolved, created, result)
        logger.info(f"Wrote {len(result.trajectory_files)} trajectories to {out_dir}")
        return result

    @staticmethod
    def _execute(
        jobs: List[Tuple[SolverConfig, int]],
        work: Callable[[Tuple[SolverConfig, int]], RunResult],
        threads: int,
        progress: Optional[RunProgress],
    ) -> List[RunResult]:
        """Run jobs in order or on a pool; results keep job order either way."""
        total = len(jobs)
        if threads <= 1:
            results = []
            for i, job in enumerate(jobs, start=1):
                results.append(work(job))
                if progress:
                    progress(i, total, f"{job[0].name} seed {job[1]}")
            return results

        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(work, job) for job in jobs]
            results = []
            for i, (job, future) in enumerate(zip(jobs, futures), start=1):
                results.append(future.result())
                if progress:
                    progress(i, total, f"{job[0].name} seed {job[1]}")
            return results

    @staticmethod
    def _write_aggregates(config: ExperimentConfig, results: List[RunResult], result: ExperimentResult) -> None:
        rows = []
        for solver in config.solvers:
            runs = [r for r in results if r.solver == solver.name]
            try:
                table: Dict[str, MetricSummary] = aggregate([r.best for r in runs])
                points = aggregate_trajectories([r.log for r in runs])
            except InsufficientRuns as e:
                logger.warning(f"{solver.name}: skipping aggregates: {e}")
                continue
            result.aggregates[solver.name] = table
            for summary in table.values():
                rows.append(
                    (solver.name, summary.metric, summary.mean, summary.halfwidth95, summary.median, summary.runs)
                )
            path = result.out_dir / "trajectories" / f"{solver.name}_mean.csv"
            result.trajectory_mean_files.append(write_trajectory_mean(path, points))

        if rows:
            result.aggregate_file = _write_csv(result.out_dir / "aggregate.csv", AGGREGATE_HEADER, rows)

    @staticmethod
    def _write_metadata(
        config: ExperimentConfig,
        dataset: Dataset,
        problems: Dict[int, Problem],
        setups: Dict[int, SeedSetup],
        resolved: dict,
        created: datetime,
        result: ExperimentResult,
    ) -> None:
        constraints = {}
        for seed, problem in problems.items():
            constraints[str(seed)] = problem.c.describe()
            if not config.experiment.resample_constraints:
                constraints = {"shared": problem.c.describe()}
                break

        meta = {
            "created": created.isoformat(),
            "finished": datetime.now(timezone.utc).isoformat(),
            "version": _package_version(),
            "dataset": {
                "path": str(dataset.source),
                "N": dataset.num_samples,
                "n": dataset.num_features,
                "labels": {str(k): v for k, v in dataset.label_histogram().items()},
            },
            "constraints": constraints,
            "config": resolved,
            "seeds": {
                str(s.seed): {
                    "lipschitz": s.lipschitz,
                    "x0_norm": float(np.linalg.norm(s.x0)),
                    "y0": None if s.y0 is None else [float(v) for v in s.y0],
                }
                for s in setups.values()
            },
            "runs": [
                {
                    "solver": r.solver,
                    "seed": r.seed,
                    "b": r.batch_size,
                    "S": r.inner_length,
                    "iterations": len(r.log),
                    "epochs": r.log.epochs,
                    "component_grad_evals": r.log.component_grad_evals,
                    "full_grad_evals": r.log.full_grad_evals,
                    "metric_evaluations": r.log.metric_evaluations,
                    "kkt_solves": r.log.kkt_solves,
                    "zero_direction_steps": r.log.zero_direction_steps,
                    "diverged": r.log.diverged,
                    "best_index": r.best.index,
                    "best_feasible": r.best.feasible,
                    "wall_seconds": r.wall_seconds,
                }
                for r in result.runs
            ],
        }
        result.metadata_file.parent.mkdir(parents=True, exist_ok=True)
        with open(result.metadata_file, "w", encoding="utf-8") as f:
            json.dump(meta, f, indent=2, default=_json_default)


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"not JSON serializable: {type(value).__name__}")
