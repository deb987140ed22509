"""Experiment and dataset MCP tools."""

import asyncio
from pathlib import Path
from typing import List, Optional

from fastmcp import Context

from ..models.tool_responses import (
    DatasetInfoResponse,
    MetricRow,
    RunExperimentResponse,
    RunSummaryRow,
    ValidateExperimentResponse,
)
from ..services.errors import SvrSqpError
from ..services.harness.experiment_config import load_config


def register_experiment_tools(mcp, services):
    """Register experiment-related tools with the MCP server."""
    experiment_service = services["experiment_service"]

    @mcp.tool
    async def dataset_info(path: str, n_features: Optional[int] = None) -> DatasetInfoResponse:
        """
        Describe a LIBSVM dataset: number of points N, feature dimension n
        and the label histogram after mapping labels to -1/+1.

        Parsed datasets are cached on disk, so repeated calls are instant.

        Args:
            path: Path to the LIBSVM text file
            n_features: Optional feature dimension override (for files whose
                highest feature index is below the true dimension)

        Returns:
            DatasetInfoResponse with N, n and label counts
        """
        try:
            info = experiment_service.dataset_info(Path(path), n_features=n_features)
            return DatasetInfoResponse(
                success=True,
                path=info.path,
                num_samples=info.num_samples,
                num_features=info.num_features,
                label_histogram={str(k): v for k, v in info.label_histogram.items()},
            )
        except (SvrSqpError, OSError, ValueError) as e:
            return DatasetInfoResponse(success=False, path=path, error=str(e))

    @mcp.tool
    async def validate_experiment(config_path: str) -> ValidateExperimentResponse:
        """
        Load an experiment TOML file and resolve its parameters against the dataset.

        Use this before run_experiment to catch typos (unknown keys are
        rejected) and to see derived values such as the inner loop length
        S = ⌊N/(c·b)⌋ for ratio settings like "N/2b".

        Args:
            config_path: Path to the experiment TOML file

        Returns:
            ValidateExperimentResponse with the resolved parameters or the
            offending key in the error message
        """
        try:
            config = load_config(Path(config_path))
            resolved = experiment_service.validate(config)
            return ValidateExperimentResponse(success=True, config_path=config_path, resolved=resolved)
        except (SvrSqpError, OSError, ValueError) as e:
            return ValidateExperimentResponse(success=False, config_path=config_path, error=str(e))

    @mcp.tool
    async def run_experiment(
        config_path: str,
        ctx: Context,
        out_dir: Optional[str] = None,
        seeds: Optional[List[int]] = None,
        threads: Optional[int] = None,
    ) -> RunExperimentResponse:
        """
        Run every (solver, seed) pair of an experiment file and write CSV results.

        Each run writes a trajectory CSV (one row per inner iteration with
        feasibility, stationarity, merit value, τ̄ and step size). The
        summary CSV holds the best iterate per run; the aggregate CSV holds
        the cross-seed mean, 95% half-width and median per solver.

        Runs can take minutes on larger datasets (a9a: N=32561).

        Args:
            config_path: Path to the experiment TOML file
            out_dir: Output directory (overrides the config and SVRSQP_OUT_DIR)
            seeds: Seeds to run (overrides the config)
            threads: Worker threads (overrides the config); 1 runs sequentially

        Returns:
            RunExperimentResponse with output paths, per-run best iterates and
            the aggregate table
        """
        loop = asyncio.get_running_loop()
        pending = []

        def progress_callback(done: int, total: int, message: str) -> None:
            # called from the worker thread; 0-5% loading, 5-95% runs, 100% written
            percent = 5 + (90 * done) // total
            pending.append(asyncio.run_coroutine_threadsafe(ctx.report_progress(percent, 100), loop))

        try:
            config = load_config(Path(config_path))
            await ctx.report_progress(0, 100)
            result = await asyncio.to_thread(
                experiment_service.run,
                config,
                Path(out_dir) if out_dir else None,
                seeds,
                threads,
                progress_callback,
            )
            await asyncio.gather(*(asyncio.wrap_future(f) for f in pending))
            await ctx.report_progress(100, 100)
        except (SvrSqpError, OSError, ValueError) as e:
            return RunExperimentResponse(success=False, config_path=config_path, error=str(e))

        return RunExperimentResponse(
            success=True,
            config_path=config_path,
            out_dir=str(result.out_dir),
            summary_file=str(result.summary_file),
            aggregate_file=str(result.aggregate_file) if result.aggregate_file else None,
            metadata_file=str(result.metadata_file),
            trajectory_files=[str(p) for p in result.trajectory_files],
            runs=[
                RunSummaryRow(
                    solver=r.solver,
                    seed=r.seed,
                    best_feasibility=r.best.feasibility_inf,
                    best_stationarity=r.best.stationarity_inf,
                    iterations=len(r.log),
                    epochs=r.log.epochs,
                )
                for r in result.runs
            ],
            aggregate=[
                MetricRow(
                    solver=solver,
                    metric=s.metric,
                    mean=s.mean,
                    halfwidth95=s.halfwidth95,
                    median=s.median,
                    runs=s.runs,
                )
                for solver, table in result.aggregates.items()
                for s in table.values()
            ],
        )
