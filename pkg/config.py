import configparser
import logging
import os
from pathlib import Path
from typing import Annotated, Any, Literal, Optional, Tuple, Union

from dotenv import load_dotenv
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationError, model_validator

from core.errors import ConfigError
from core.model import SchemeParams, validate_scheme
from core.scaling import PoolRule, ScalingPreset
from simulation.analysis import DEFAULT_PREFIX_CAP


logger = logging.getLogger(__name__)


load_dotenv()

THREADS_ENV = "KEYGRAPH_THREADS"
MAX_SEED = 2**64


def get_thread_count(override: Optional[int] = None) -> int:
    """
    Worker count for Monte-Carlo runs: `override` if given, else KEYGRAPH_THREADS,
    else 1.

    The environment is populated from .env by python-dotenv at import; this
    function never reads the file directly.
    """
    if override is not None:
        raw: Union[int, str] = override
        source = "--threads"
    else:
        raw = os.getenv(THREADS_ENV, "1")
        source = THREADS_ENV
    try:
        threads = int(raw)
    except ValueError:
        logger.error("%s is not an integer: %r", source, raw)
        raise ConfigError(f"{source} must be a positive integer, got {raw!r}") from None
    if threads < 1:
        logger.error("%s must be at least 1, got %s", source, threads)
        raise ConfigError(f"{source} must be a positive integer, got {threads}")
    return threads


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return tuple(item.strip() for item in value.split(",") if item.strip())
    return value


FloatList = Annotated[Tuple[float, ...], BeforeValidator(_split_list)]
IntList = Annotated[Tuple[int, ...], BeforeValidator(_split_list)]


class _Block(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class SchemeBlock(_Block):
    """`[scheme]`: a fixed scheme."""

    mu: FloatList
    ring_sizes: IntList
    pool_size: int

    def to_scheme(self) -> SchemeParams:
        return validate_scheme(len(self.mu), self.mu, self.ring_sizes, self.pool_size)


class PresetBlock(_Block):
    """`[preset]`: a scaling family dimensioned per n."""

    pool_rule: PoolRule
    sigma: Optional[float] = None
    pool: Optional[int] = None
    ring_shape: FloatList
    mu: FloatList
    target_c: float = 1.0

    def to_preset(self) -> ScalingPreset:
        return ScalingPreset(**self.model_dump())


class ExperimentBlock(_Block):
    n: Optional[int] = Field(default=None, ge=1)
    n_grid: IntList = ()
    c_grid: FloatList = ()
    trials: int = Field(default=1, ge=1)
    master_seed: Optional[int] = Field(default=None, ge=0, lt=MAX_SEED)
    beta: Optional[float] = Field(default=None, gt=0.0, lt=0.5)
    gamma: Optional[float] = Field(default=None, gt=0.0, lt=0.5)
    s: IntList = ()
    sigma: Optional[float] = None
    trial: int = Field(default=0, ge=0)
    max_ell: int = Field(default=DEFAULT_PREFIX_CAP, ge=1)


class OutputBlock(_Block):
    """
    `[output]`: the main result file plus two optional sweep side files,
    `records` (raw trials as JSON lines) and `coverage` (per-ell coverage
    event frequencies as CSV).
    """

    path: Optional[str] = None
    format: Literal["csv", "jsonl"] = "csv"
    records: Optional[str] = None
    coverage: Optional[str] = None


class RunConfig(_Block):
    """
    A parsed run configuration.

    Exactly one of `scheme` / `preset` is present; both are validated into
    domain types here so a bad file fails before any command starts.
    """

    scheme: Optional[SchemeBlock] = None
    preset: Optional[PresetBlock] = None
    experiment: ExperimentBlock = ExperimentBlock()
    output: OutputBlock = OutputBlock()

    @model_validator(mode="after")
    def _one_parameter_block(self) -> "RunConfig":
        if (self.scheme is None) == (self.preset is None):
            raise ValueError("exactly one of [scheme] or [preset] must be present")
        if self.scheme is not None:
            self.scheme.to_scheme()
        else:
            self.preset.to_preset()
        return self

    def n_values(self) -> Tuple[int, ...]:
        """`n_grid` if set, else the single `n`, else empty."""
        if self.experiment.n_grid:
            return self.experiment.n_grid
        return (self.experiment.n,) if self.experiment.n is not None else ()

    def require_seed(self) -> int:
        if self.experiment.master_seed is None:
            logger.error("master_seed missing from [experiment] and --seed")
            raise ConfigError("master_seed is required: set it in [experiment] or pass --seed")
        return self.experiment.master_seed

    def with_overrides(
        self,
        seed: Optional[int] = None,
        trials: Optional[int] = None,
        out: Optional[str] = None,
    ) -> "RunConfig":
        """Apply command-line overrides; values are re-validated."""
        experiment = self.experiment.model_dump()
        output = self.output.model_dump()
        if seed is not None:
            experiment["master_seed"] = seed
        if trials is not None:
            experiment["trials"] = trials
        if out is not None:
            output["path"] = out
        return _build_config(
            {
                **self.model_dump(exclude={"experiment", "output"}, exclude_none=True),
                "experiment": experiment,
                "output": output,
            }
        )


def _describe(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error.get("loc", ()))
        message = str(error.get("msg", "")).removeprefix("Value error, ")
        parts.append(f"{location}: {message}" if location else message)
    return "; ".join(parts)


def _build_config(data: dict) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        message = _describe(exc)
        logger.error("Invalid run configuration: %s", message)
        raise ConfigError(message) from exc


def parse_run_config(text: str) -> RunConfig:
    """Parse the sectioned key-value grammar from a string."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        logger.error("Malformed configuration: %s", exc)
        raise ConfigError(f"malformed configuration: {exc}") from exc
    data = {section: dict(parser.items(section)) for section in parser.sections()}
    return _build_config(data)


def load_run_config(path: Union[str, Path]) -> RunConfig:
    config_path = Path(path)
    try:
        text = config_path.read_text(encoding="utf-8")
    except OSError as exc:
        logger.error("Cannot read configuration %s: %s", config_path, exc)
        raise ConfigError(f"cannot read configuration {config_path}: {exc}") from exc
    logger.info("Loaded configuration from %s", config_path)
    return parse_run_config(text)


__all__ = [
    "THREADS_ENV",
    "get_thread_count",
    "SchemeBlock",
    "PresetBlock",
    "ExperimentBlock",
    "OutputBlock",
    "RunConfig",
    "parse_run_config",
    "load_run_config",
]
