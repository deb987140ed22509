#!/usr/bin/env python3
# ruff: noqa: E402
"""
SVR-SQP command line and MCP server.

    svr-sqp run <config.toml> [--out-dir DIR] [--seeds 0 1 ...] [--threads K]
    svr-sqp validate <config.toml>
    svr-sqp info <dataset.libsvm> [--n-features n]
    svr-sqp serve [--transport stdio|sse]

Exit codes: 0 success, 1 configuration or usage error, 2 runtime error.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

logger = logging.getLogger(__name__)

# Add project paths for imports
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from fastmcp import FastMCP

from src.services.errors import ConfigError, SvrSqpError
from src.services.harness.experiment_config import load_config
from src.services.harness.experiment_service import ExperimentService
from src.services.problems.dataset_service import DatasetService

__version__ = "0.1.0"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

SERVER_INSTRUCTIONS = """
You run constrained stochastic optimization experiments: logistic regression on
LIBSVM datasets subject to equality constraints (random linear constraints or a
norm constraint), solved by SVR-SQP and two baselines.

## Workflow
1. dataset_info to check a dataset file (N points, n features, label balance).
2. validate_experiment on a TOML config; fix any key named in the error.
3. run_experiment; it returns the per-run best iterates and the cross-seed
   mean, 95% half-width and median of feasibility and stationarity.

## Reading results
- feasibility is ‖c(x)‖∞ at the best iterate; runs reaching 1e-6 count as feasible.
- stationarity is ‖∇f(x) + J(x)ᵀy‖∞ with least-squares multipliers y.
- Lower is better for both; compare stationarity only among feasible runs.
"""


def build_services(use_cache: bool = True) -> dict:
    """Services shared by the CLI and the MCP tools."""
    dataset_service = DatasetService(use_cache=use_cache)
    return {
        "dataset_service": dataset_service,
        "experiment_service": ExperimentService(dataset_service=dataset_service),
    }


def create_server(use_cache: bool = True) -> FastMCP:
    """FastMCP server with all tools registered."""
    from src.tools import register_all_tools

    mcp = FastMCP(name="SVR-SQP Experiment Server", instructions=SERVER_INSTRUCTIONS)
    register_all_tools(mcp, build_services(use_cache))
    return mcp


class _Parser(argparse.ArgumentParser):
    """Unknown or malformed arguments exit with the configuration error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="svr-sqp", description="Stochastic variance-reduced SQP experiments")
    parser.add_argument("--version", action="version", version=f"svr-sqp {__version__}")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (stderr)",
    )
    parser.add_argument("--no-cache", action="store_true", help="Parse datasets without the disk cache")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run an experiment config")
    run.add_argument("config", type=Path)
    run.add_argument("--out-dir", type=Path, default=None, help="Output directory (default: $SVRSQP_OUT_DIR)")
    run.add_argument("--seeds", type=int, nargs="+", default=None, help="Seeds to run, overriding the config")
    run.add_argument("--threads", type=int, default=None, help="Worker threads; 1 runs sequentially")

    validate = sub.add_parser("validate", help="Validate a config and print resolved parameters")
    validate.add_argument("config", type=Path)

    info = sub.add_parser("info", help="Print N, n and the label histogram of a LIBSVM file")
    info.add_argument("dataset", type=Path)
    info.add_argument("--n-features", type=int, default=None, help="Feature dimension override")

    serve = sub.add_parser("serve", help="Start the MCP server")
    serve.add_argument("--transport", choices=["stdio", "sse"], default="stdio", help="Transport mode")
    serve.add_argument("--port", type=int, default=int(os.environ.get("PORT", 8081)), help="Port for SSE")
    serve.add_argument("--host", default="0.0.0.0", help="Host for SSE")
    return parser


def _print_progress(done: int, total: int, message: str) -> None:
    print(f"[{done}/{total}] {message}", file=sys.stderr)


def _cmd_run(args, service: ExperimentService) -> int:
    if args.threads is not None and args.threads < 1:
        raise ConfigError("threads", "must be at least 1")
    config = load_config(args.config)
    result = service.run(config, out_dir=args.out_dir, seeds=args.seeds, threads=args.threads, progress=_print_progress)

    print(f"summary: {result.summary_file}")
    if result.aggregate_file:
        print(f"aggregate: {result.aggregate_file}")
    print(f"metadata: {result.metadata_file}")
    for solver, table in result.aggregates.items():
        for s in table.values():
            print(f"{solver:<24} {s.metric:<13} {s.mean:.3e} ± {s.halfwidth95:.3e} (median {s.median:.3e})")
    return EXIT_OK


def _cmd_validate(args, service: ExperimentService) -> int:
    config = load_config(args.config)
    resolved = service.validate(config)
    print(json.dumps(resolved, indent=2, default=str))
    return EXIT_OK


def _cmd_info(args, service: ExperimentService) -> int:
    try:
        info = service.dataset_info(args.dataset, n_features=args.n_features)
    except FileNotFoundError as e:
        raise ConfigError("dataset", str(e)) from e
    labels = " ".join(f"{k:+d}={v}" for k, v in sorted(info.label_histogram.items()))
    print(f"N={info.num_samples} n={info.num_features}")
    print(f"labels: {labels}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    mcp = create_server(use_cache=not args.no_cache)
    print(f"SVR-SQP MCP Server v{__version__} starting...", file=sys.stderr)
    print(f"Transport: {args.transport}", file=sys.stderr)
    if args.transport == "sse":
        print(f"Listening on: http://{args.host}:{args.port}", file=sys.stderr)
        mcp.run(transport="sse", host=args.host, port=args.port)
    else:
        mcp.run()
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    if args.command == "serve":
        return _cmd_serve(args)

    service = build_services(use_cache=not args.no_cache)["experiment_service"]
    commands = {"run": _cmd_run, "validate": _cmd_validate, "info": _cmd_info}
    try:
        return commands[args.command](args, service)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (SvrSqpError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as e:
        print(f"invalid argument: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
