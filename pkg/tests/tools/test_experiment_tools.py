"""
Tests for the experiment MCP tools, called directly without a transport.
"""

import pytest

from src.services.harness.experiment_service import ExperimentService
from src.services.problems.dataset_service import DatasetService
from src.tools.experiment_tools import register_experiment_tools
from tests.conftest import SYNTHETIC_DIM, SYNTHETIC_N


class FakeMCP:
    """Collects the functions registered with @mcp.tool."""

    def __init__(self):
        self.tools = {}

    def tool(self, fn):
        self.tools[fn.__name__] = fn
        return fn


class FakeContext:
    def __init__(self):
        self.progress = []

    async def report_progress(self, progress, total):
        self.progress.append((progress, total))


def _write_config(tmp_path, dataset, extra="") -> str:
    path = tmp_path / "exp.toml"
    path.write_text(
        f"""
[experiment]
dataset = "{dataset.name}"
seeds = [0, 1]
epochs = 2.0
b = 4
S = "N/2b"
{extra}

[constraint]
kind = "linear"
m = 2

[[solvers]]
kind = "svr_sqp_a"
"""
    )
    return str(path)


@pytest.fixture
def tools():
    mcp = FakeMCP()
    services = {"experiment_service": ExperimentService(DatasetService(use_cache=False))}
    register_experiment_tools(mcp, services)
    return mcp.tools


class TestRegistration:
    """Tests for tool registration."""

    def test_registers_all_tools(self, tools):
        assert set(tools) == {"dataset_info", "validate_experiment", "run_experiment"}


@pytest.mark.fast
class TestDatasetInfo:
    """Tests for the dataset_info tool."""

    async def test_describes_file(self, tools, synthetic_file):
        response = await tools["dataset_info"](str(synthetic_file))
        assert response.success
        assert (response.num_samples, response.num_features) == (SYNTHETIC_N, SYNTHETIC_DIM)
        assert set(response.label_histogram) == {"-1", "1"}

    async def test_missing_file(self, tools, tmp_path):
        response = await tools["dataset_info"](str(tmp_path / "absent"))
        assert not response.success
        assert "not found" in response.error

    async def test_undecodable_file(self, tools, tmp_path):
        path = tmp_path / "binary.libsvm"
        path.write_bytes(b"-1 2:\xff\xfe\n")
        response = await tools["dataset_info"](str(path))
        assert not response.success
        assert "line 1" in response.error

    async def test_nonpositive_feature_override(self, tools, synthetic_file):
        response = await tools["dataset_info"](str(synthetic_file), n_features=0)
        assert not response.success
        assert "n_features" in response.error


@pytest.mark.fast
class TestValidateExperiment:
    """Tests for the validate_experiment tool."""

    async def test_resolves_parameters(self, tools, tmp_path, synthetic_file):
        response = await tools["validate_experiment"](_write_config(tmp_path, synthetic_file))
        assert response.success
        assert response.resolved["dataset"] == {"N": SYNTHETIC_N, "n": SYNTHETIC_DIM}
        assert response.resolved["solvers"][0]["S"] == SYNTHETIC_N // 8

    async def test_names_offending_key(self, tools, tmp_path, synthetic_file):
        response = await tools["validate_experiment"](_write_config(tmp_path, synthetic_file, "bogus = 1"))
        assert not response.success
        assert "experiment.bogus" in response.error

    async def test_missing_config(self, tools, tmp_path):
        response = await tools["validate_experiment"](str(tmp_path / "absent.toml"))
        assert not response.success
        assert response.error.startswith("path:")


@pytest.mark.fast
class TestRunExperiment:
    """Tests for the run_experiment tool."""

    async def test_runs_and_reports(self, tools, tmp_path, synthetic_file):
        ctx = FakeContext()
        response = await tools["run_experiment"](
            _write_config(tmp_path, synthetic_file), ctx, out_dir=str(tmp_path / "out")
        )
        assert response.success
        assert len(response.runs) == 2
        assert len(response.trajectory_files) == 2
        assert {row.metric for row in response.aggregate} == {"feasibility", "stationarity"}
        assert response.aggregate_file.endswith("aggregate.csv")
        assert ctx.progress == [(0, 100), (50, 100), (95, 100), (100, 100)]

    async def test_seed_override(self, tools, tmp_path, synthetic_file):
        ctx = FakeContext()
        response = await tools["run_experiment"](
            _write_config(tmp_path, synthetic_file), ctx, out_dir=str(tmp_path / "out"), seeds=[3]
        )
        assert response.success
        assert [row.seed for row in response.runs] == [3]
        assert ctx.progress == [(0, 100), (95, 100), (100, 100)]
        assert response.aggregate == []
        assert response.aggregate_file is None

    async def test_error_response(self, tools, tmp_path, synthetic_file):
        response = await tools["run_experiment"](
            _write_config(tmp_path, synthetic_file, "sigma = 2.0"), FakeContext(), out_dir=str(tmp_path / "out")
        )
        assert not response.success
        assert "experiment.sigma" in response.error
