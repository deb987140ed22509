"""Experiment configuration: TOML files validated by pydantic models.

A config has one ``[experiment]`` table, one ``[constraint]`` table and one or
more ``[[solvers]]`` tables::

    [experiment]
    dataset = "data/australian"
    seeds = [0, 1, 2]
    b = 16
    S = "N/2b"

    [constraint]
    kind = "linear"
    m = 10

    [[solvers]]
    kind = "svr_sqp_a"

Unknown keys are rejected, and every validation failure surfaces as a
ConfigError naming the offending key.
"""

import re
import tomllib
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..errors import ConfigError
from ..models.solver_data import SamplingMode

INNER_RATIO = re.compile(r"^N/(\d*)b$")
BATCH_RANGE = "must be in [1, N−1]"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


def _check_inner_length(value: Union[int, str]) -> Union[int, str]:
    if isinstance(value, bool):
        raise ValueError("must be an integer or a ratio like 'N/2b'")
    if isinstance(value, int):
        if value < 1:
            raise ValueError("must be at least 1")
        return value
    match = INNER_RATIO.match(value.replace(" ", ""))
    if match is None:
        raise ValueError(f"'{value}' is neither an integer nor a ratio like 'N/2b'")
    if match.group(1) and int(match.group(1)) < 1:
        raise ValueError("ratio divisor must be at least 1")
    return value.replace(" ", "")


def resolve_inner_length(value: Union[int, str], num_components: int, batch_size: int) -> int:
    """Absolute S, or ⌊N/(c·b)⌋ (at least 1) for a ratio 'N/<c>b'."""
    if isinstance(value, int):
        return value
    match = INNER_RATIO.match(value)
    if match is None:
        raise ConfigError("S", f"'{value}' is neither an integer nor a ratio like 'N/2b'")
    divisor = int(match.group(1) or 1)
    return max(1, num_components // (divisor * batch_size))


# =============================================================================
# Constraints
# =============================================================================


class LinearConstraintConfig(_Strict):
    """Random linear constraints A x = a₁ with m rows."""

    kind: Literal["linear"] = "linear"
    m: int = Field(default=10, ge=1, description="Number of constraints")


class L2BallConstraintConfig(_Strict):
    """Norm constraint ‖x‖₂² = a₂."""

    kind: Literal["l2ball"] = "l2ball"
    a2: float = Field(default=1.0, gt=0, description="Squared radius")


ConstraintConfig = Annotated[
    Union[LinearConstraintConfig, L2BallConstraintConfig],
    Field(discriminator="kind"),
]


# =============================================================================
# Solvers
# =============================================================================


class _SolverBase(_Strict):
    label: Optional[str] = Field(default=None, description="Name used in output files; defaults to kind")
    batch_size: Optional[int] = Field(default=None, alias="b", description="Overrides experiment.b")
    inner_length: Optional[Union[int, str]] = Field(default=None, alias="S", description="Overrides experiment.S")

    @field_validator("batch_size")
    @classmethod
    def _batch_positive(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 1:
            raise ValueError(BATCH_RANGE)
        return v

    @field_validator("inner_length")
    @classmethod
    def _inner_valid(cls, v):
        return None if v is None else _check_inner_length(v)

    @field_validator("label")
    @classmethod
    def _label_safe(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and not re.fullmatch(r"[A-Za-z0-9_.\-]+", v):
            raise ValueError("may only contain letters, digits, '_', '.' and '-'")
        return v

    @property
    def name(self) -> str:
        return self.label or self.kind  # type: ignore[attr-defined]


class SvrSqpConstantConfig(_SolverBase):
    """SVR-SQP with a constant step size."""

    kind: Literal["svr_sqp_c"] = "svr_sqp_c"
    alpha: float = Field(gt=0, description="Constant step size")


class SvrSqpAdaptiveConfig(_SolverBase):
    """SVR-SQP with the adaptive step size."""

    kind: Literal["svr_sqp_a"] = "svr_sqp_a"
    beta: float = Field(default=1.0, gt=0, le=1, description="Step scaling")
    alpha_u: float = Field(default=1e6, gt=0, description="Upper cap on the step before scaling")


class MinibatchSqpConfig(_SolverBase):
    """SQP on plain mini-batch gradients; constant step if alpha is set, adaptive otherwise."""

    kind: Literal["minibatch_sqp"] = "minibatch_sqp"
    alpha: Optional[float] = Field(default=None, gt=0, description="Constant step size")
    beta: float = Field(default=1.0, gt=0, le=1)
    alpha_u: float = Field(default=1e6, gt=0)


class StoSubgradVrConfig(_SolverBase):
    """Variance-reduced stochastic subgradient method on the merit function."""

    kind: Literal["sto_subgrad_vr"] = "sto_subgrad_vr"
    alpha: float = Field(gt=0, description="Step numerator; the step is alpha / (tau·L + Γ)")
    tau: float = Field(gt=0, description="Fixed merit parameter")


SolverConfig = Annotated[
    Union[SvrSqpConstantConfig, SvrSqpAdaptiveConfig, MinibatchSqpConfig, StoSubgradVrConfig],
    Field(discriminator="kind"),
]


# =============================================================================
# Experiment
# =============================================================================


class ExperimentSection(_Strict):
    """Shared settings of every run in the experiment."""

    dataset: Path = Field(description="LIBSVM file; relative paths resolve against the config file")
    n_features: Optional[int] = Field(default=None, ge=1, description="Feature dimension override")
    seeds: List[int] = Field(default_factory=lambda: list(range(10)), min_length=1)
    epochs: float = Field(default=30.0, gt=0, description="Budget in effective passes over the data")
    batch_size: int = Field(default=16, alias="b")
    inner_length: Union[int, str] = Field(default="N/2b", alias="S")
    sigma: float = Field(default=0.5, gt=0, lt=1)
    eps_tau: float = Field(default=1e-6, gt=0, lt=1)
    tau_init: float = Field(default=0.1, gt=0)
    init_scale: float = Field(default=0.1, gt=0, description="‖x₀‖₂")
    sampling: SamplingMode = SamplingMode.WITH_REPLACEMENT
    constraint_seed: int = Field(default=0, description="Seed of the constraint data shared by all runs")
    resample_constraints: bool = Field(default=False, description="Draw constraint data from each run seed instead")
    cache_reference_gradients: bool = False
    check_invariants: bool = True
    use_cache: bool = True
    threads: int = Field(default=1, ge=1)
    out_dir: Optional[Path] = None

    @field_validator("batch_size")
    @classmethod
    def _batch_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(BATCH_RANGE)
        return v

    @field_validator("inner_length")
    @classmethod
    def _inner_valid(cls, v):
        return _check_inner_length(v)

    @field_validator("seeds")
    @classmethod
    def _seeds_unique(cls, v: List[int]) -> List[int]:
        if len(set(v)) != len(v):
            raise ValueError("seeds must be distinct")
        if any(s < 0 for s in v):
            raise ValueError("seeds must be nonnegative")
        return v


class ExperimentConfig(_Strict):
    """A validated experiment file."""

    experiment: ExperimentSection
    constraint: ConstraintConfig = Field(default_factory=LinearConstraintConfig)
    solvers: List[SolverConfig] = Field(min_length=1)

    @model_validator(mode="after")
    def _labels_unique(self) -> "ExperimentConfig":
        names = [s.name for s in self.solvers]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"duplicate solver labels {duplicates}; set 'label' to tell them apart")
        return self

    def batch_size_for(self, solver: SolverConfig, num_components: int) -> int:
        """The solver's batch size, checked against N."""
        if solver.batch_size is not None:
            b, key = solver.batch_size, f"solvers.{solver.name}.b"
        else:
            b, key = self.experiment.batch_size, "experiment.b"
        if b > num_components:
            raise ConfigError(key, f"{BATCH_RANGE} (got {b}, N={num_components})")
        return b

    def inner_length_for(self, solver: SolverConfig, num_components: int) -> int:
        value = solver.inner_length if solver.inner_length is not None else self.experiment.inner_length
        return resolve_inner_length(value, num_components, self.batch_size_for(solver, num_components))

    def resolved(self, num_components: int) -> dict:
        """Parameters after resolving N-dependent values, for display and metadata."""
        solvers = []
        for s in self.solvers:
            entry = s.model_dump(mode="json", exclude_none=True)
            entry["b"] = self.batch_size_for(s, num_components)
            entry["S"] = self.inner_length_for(s, num_components)
            entry.pop("batch_size", None)
            entry.pop("inner_length", None)
            solvers.append(entry)
        return {
            "experiment": self.experiment.model_dump(mode="json", by_alias=True),
            "constraint": self.constraint.model_dump(mode="json"),
            "solvers": solvers,
        }


def _first_error(error: ValidationError) -> ConfigError:
    first = error.errors()[0]
    key = ".".join(str(part) for part in first["loc"]) or "config"
    reason = first["msg"].removeprefix("Value error, ")
    return ConfigError(key, reason)


def parse_config(data: dict, base_dir: Optional[Path] = None) -> ExperimentConfig:
    """Validate an already-parsed mapping.

    Raises:
        ConfigError: Naming the first offending key
    """
    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise _first_error(e) from e

    config.experiment.dataset = config.experiment.dataset.expanduser()
    if base_dir is not None and not config.experiment.dataset.is_absolute():
        config.experiment.dataset = (base_dir / config.experiment.dataset).resolve()
    return config


def load_config(path: Path) -> ExperimentConfig:
    """Read and validate a TOML experiment file.

    Raises:
        ConfigError: If the file is missing, is not valid TOML, or fails validation
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError("path", f"config file not found: {path}")
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError("toml", str(e)) from e
    return parse_config(data, base_dir=path.parent)
