import json
import logging
import os
import re
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, field_validator, model_validator

from .errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_OUTPUT_DIR = "results"
CONFIG_SUFFIXES = (".json", ".yaml", ".yml")


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ERMParams(StrictModel):
    l2: float = Field(default=1e-4, gt=0)
    tol: float = Field(default=1e-6, gt=0)
    max_iter: int = Field(default=500, ge=1)
    solver: Literal["newton", "gradient"] = "newton"


class _LearnerSpec(StrictModel):
    name: Optional[str] = None

    @property
    def id(self) -> str:
        return self.name or self.kind


class OGDSpec(_LearnerSpec):
    kind: Literal["ogd"] = "ogd"
    eta: float = Field(default=0.05, gt=0)


class FTLSpec(_LearnerSpec):
    kind: Literal["ftl"] = "ftl"
    erm: ERMParams = Field(default_factory=ERMParams)


class OracleSpec(_LearnerSpec):
    """Period and phase count default to the ground truth of the task sequence."""

    kind: Literal["oracle"] = "oracle"
    period: Optional[int] = Field(default=None, ge=1)
    n_phases: Optional[int] = Field(default=None, ge=1)
    offset: int = 0
    erm: ERMParams = Field(default_factory=ERMParams)


class AdaptiveSpec(_LearnerSpec):
    kind: Literal["adaptive"] = "adaptive"
    window: int = Field(default=50, ge=2)
    threshold: float = Field(default=0.4, gt=0, lt=1)
    agreement: float = Field(default=0.95, gt=0, le=1)
    period_resolution: int = Field(default=10, ge=1)
    min_change_points: int = Field(default=3, ge=3)
    agreement_sample: int = Field(default=2000, ge=2)
    erm: ERMParams = Field(default_factory=ERMParams)


class BayesSpec(_LearnerSpec):
    kind: Literal["bayes"] = "bayes"


LearnerSpec = Annotated[
    Union[OGDSpec, FTLSpec, OracleSpec, AdaptiveSpec, BayesSpec], Field(discriminator="kind")
]

_LEARNER_ADAPTER = TypeAdapter(LearnerSpec)


def learner_spec(value: Union[str, dict, _LearnerSpec]) -> _LearnerSpec:
    """Coerce a learner kind, mapping or spec object into a validated learner spec."""
    if isinstance(value, _LearnerSpec):
        return value
    if isinstance(value, str):
        value = {"kind": value}
    return _LEARNER_ADAPTER.validate_python(value)


class TaskSpec(StrictModel):
    name: str
    mu_pos: List[float] = Field(min_length=1)
    mu_neg: List[float] = Field(min_length=1)
    sigma: float = Field(default=1.0, gt=0)
    prior_pos: float = Field(default=0.5, ge=0, le=1)
    label_convention: Literal["normal", "flipped"] = "normal"

    @model_validator(mode="after")
    def _same_dimension(self) -> "TaskSpec":
        if len(self.mu_pos) != len(self.mu_neg):
            raise ValueError("mu_pos and mu_neg must have the same length")
        return self


class EvaluationConfig(StrictModel):
    epsilon: float = Field(default=0.05, gt=0)
    delta: float = Field(default=0.1, gt=0, lt=1)
    t_prime: int = Field(default=3000, ge=0)
    horizon_T: Optional[int] = None
    n_trials: int = Field(default=20, ge=1)
    references: List[Literal["strong", "weak"]] = Field(default_factory=lambda: ["strong"], min_length=1)
    weak_two_sided: bool = False
    t_prime_grid: Optional[List[int]] = None

    @model_validator(mode="after")
    def _check_times(self) -> "EvaluationConfig":
        if self.horizon_T is not None and self.horizon_T <= self.t_prime:
            raise ValueError("horizon_T must be greater than t_prime")
        if self.t_prime_grid is not None:
            if not self.t_prime_grid:
                raise ValueError("t_prime_grid must not be empty")
            if any(b <= a for a, b in zip(self.t_prime_grid, self.t_prime_grid[1:])):
                raise ValueError("t_prime_grid must be strictly ascending")
            if self.horizon_T is not None and self.horizon_T <= self.t_prime_grid[-1]:
                raise ValueError("horizon_T must be greater than every t_prime in the grid")
        return self


class RiskConfig(StrictModel):
    mode: Literal["analytic", "monte_carlo"] = "analytic"
    mc_samples: int = Field(default=10_000, ge=1)
    reference: Literal["strong", "weak"] = "strong"


def _env_output_dir() -> str:
    return os.getenv("PROLEARN_OUTPUT_DIR", DEFAULT_OUTPUT_DIR)


def _env_workers() -> int:
    raw = os.getenv("PROLEARN_WORKERS", "1")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"PROLEARN_WORKERS must be an integer, got {raw!r}", field="workers") from None


class ExperimentConfig(StrictModel):
    scenario: Literal["fig3a", "fig3b", "constant", "custom"] = "fig3a"
    tasks: Optional[List[TaskSpec]] = None
    period: int = 500
    samples_per_step: int = Field(default=1, ge=1)
    horizon: int = Field(default=5000, ge=1)
    learners: List[LearnerSpec]
    seeds: List[int] = Field(default_factory=lambda: list(range(1, 11)), min_length=1)
    protocol: Literal["streaming", "frozen"] = "streaming"
    evaluation: EvaluationConfig = Field(default_factory=EvaluationConfig)
    risk: RiskConfig = Field(default_factory=RiskConfig)
    output_dir: str = Field(default_factory=_env_output_dir)
    workers: int = Field(default_factory=_env_workers, ge=1)
    plot_stride: int = Field(default=10, ge=1)
    emit_pdf: bool = False

    @field_validator("period")
    @classmethod
    def _period_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("period must be positive")
        return value

    @field_validator("learners", mode="before")
    @classmethod
    def _expand_shorthand(cls, value):
        if isinstance(value, list):
            if not value:
                raise ValueError("learners must not be empty")
            return [{"kind": item} if isinstance(item, str) else item for item in value]
        return value

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        ids = [spec.id for spec in self.learners]
        if len(set(ids)) != len(ids):
            raise ValueError(f"learner ids must be unique, got {ids}")
        if self.scenario == "custom" and not self.tasks:
            raise ValueError("scenario 'custom' requires a non-empty 'tasks' list")
        if self.scenario != "custom" and self.tasks:
            raise ValueError("'tasks' is only allowed with scenario 'custom'")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be unique")
        return self

    def echo(self) -> str:
        """Fully resolved config as JSON; parsing it back yields an equal config."""
        return self.model_dump_json(indent=2)


def _locate_line(message: str) -> Optional[int]:
    if match := re.search(r"line (\d+)", message):
        return int(match.group(1))
    return None


def _load_document(text: str, is_json: bool):
    try:
        if is_json:
            return json.loads(text)
        return yaml.safe_load(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed JSON: {e.msg}", line=e.lineno) from e
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else _locate_line(str(e))
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigError(f"malformed YAML: {problem}", line=line) from e


def _merge(base: dict, updates: dict) -> dict:
    for key, value in updates.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = value
    return base


def parse_config(source: Union[str, Path], **overrides) -> ExperimentConfig:
    """Parse and validate an experiment config from a file path or inline YAML/JSON text.

    Args:
        source: path to a .json/.yaml/.yml file, or the document text itself
        overrides: fields merged over the document's values (CLI flags); nested mappings merge key by key

    Returns:
        ExperimentConfig: validated config with every default resolved
    """
    path = Path(source) if isinstance(source, Path) or "\n" not in str(source) else None
    if path is not None and path.is_file():
        text = path.read_text(encoding="utf-8")
        is_json = path.suffix.lower() == ".json"
        logger.info(f"Loading experiment config from {path}")
    elif isinstance(source, Path) or (path is not None and path.suffix.lower() in CONFIG_SUFFIXES):
        raise ConfigError(f"config file not found: {source}")
    else:
        text = str(source)
        is_json = text.lstrip().startswith("{")

    document = _load_document(text, is_json)
    if not isinstance(document, dict):
        raise ConfigError("config must be a mapping of fields")
    _merge(document, {key: value for key, value in overrides.items() if value is not None})
    return validate_config(document)


def validate_config(document: dict) -> ExperimentConfig:
    """Validate a config mapping, reporting every problem with its field path."""
    if "workers" not in document:
        document = {**document, "workers": _env_workers()}
    try:
        return ExperimentConfig.model_validate(document)
    except ValidationError as e:
        problems = []
        first_field = None
        for err in e.errors():
            field = ".".join(str(part) for part in err["loc"]) or "<root>"
            first_field = first_field or field
            problems.append(f"{field}: {err['msg']}")
        raise ConfigError("; ".join(problems), field=first_field) from e
