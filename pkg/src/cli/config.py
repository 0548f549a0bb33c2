"""
Run configuration for the command line: a validated pydantic model merged
from an optional key=value file and the command-line flags (flags win).
"""
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from config.settings import DEFAULT_CHAINS, DEFAULT_SEED, OUTPUT_DIR
from src.dynamics.factory import MAPS
from src.measures.measures import MEASURES
from src.transferop.weights import WEIGHTS

_POSITIVE_INTS = ("n", "depth", "samples", "chains", "paths", "steps", "bins", "k_limit", "m_max", "threads",
                  "trials")


class RunConfig(BaseModel):
    """Everything a subcommand needs; echoed into the run manifest."""

    model_config = ConfigDict(extra="forbid")

    command: str
    map: str = "doubling"
    k_max: int = 1000
    weight: str = "half"
    expression: Optional[str] = None
    measure: str = "lebesgue"
    action: Literal["pushforward", "operator"] = "pushforward"
    function: Optional[str] = None
    p: Optional[List[float]] = None
    x0: Optional[float] = None
    n: int = 1024
    depth: int = 6
    samples: int = 100_000
    burn_in: int = 100
    chains: int = DEFAULT_CHAINS
    paths: int = 10_000
    steps: int = 20
    bins: int = 32
    k_limit: int = 10
    m_max: int = 5
    trials: int = 100
    tol: float = 1e-9
    seed: int = DEFAULT_SEED
    threads: int = 1
    progress: bool = False
    output: Path = OUTPUT_DIR
    format: Literal["csv", "json"] = "csv"

    @field_validator(*_POSITIVE_INTS)
    @classmethod
    def _positive(cls, value: int, info) -> int:
        if value < 1:
            raise ValueError(f"{info.field_name} must be a positive integer, got {value}")
        return value

    @field_validator("n")
    @classmethod
    def _grid(cls, value: int) -> int:
        if value < 2:
            raise ValueError(f"grid size n must be at least 2, got {value}")
        return value

    @field_validator("k_max")
    @classmethod
    def _k_max(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"k_max must be a positive integer, got {value}")
        return value

    @field_validator("burn_in", "seed")
    @classmethod
    def _nonnegative(cls, value: int, info) -> int:
        if value < 0:
            raise ValueError(f"{info.field_name} must be nonnegative, got {value}")
        return value

    @field_validator("tol")
    @classmethod
    def _tolerance(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"tol must be positive, got {value}")
        return value

    @field_validator("map")
    @classmethod
    def _known_map(cls, value: str) -> str:
        if value.lower() not in MAPS:
            raise ValueError(f"unknown map {value!r}; available: {', '.join(MAPS)}")
        return value.lower()

    @field_validator("weight")
    @classmethod
    def _known_weight(cls, value: str) -> str:
        if value.lower() not in WEIGHTS:
            raise ValueError(f"unknown weight {value!r}; available: {', '.join(WEIGHTS)}")
        return value.lower()

    @field_validator("measure")
    @classmethod
    def _known_measure(cls, value: str) -> str:
        if value.lower() not in MEASURES:
            raise ValueError(f"unknown measure {value!r}; available: {', '.join(MEASURES)}")
        return value.lower()

    @field_validator("p", mode="before")
    @classmethod
    def _split_p(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [float(part) for part in value.replace(",", " ").split()]
        return value

    @field_validator("x0")
    @classmethod
    def _unit_interval(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not 0.0 <= value < 1.0:
            raise ValueError(f"x0 must lie in [0, 1), got {value}")
        return value

    @model_validator(mode="after")
    def _custom_needs_expression(self) -> "RunConfig":
        if self.weight == "custom" and not self.expression:
            raise ValueError("weight 'custom' needs --expression")
        return self


def read_config_file(path: Optional[Path]) -> Dict[str, Any]:
    """key=value pairs from a plain config file; keys may use dashes or underscores."""
    if path is None:
        return {}
    values = dotenv_values(path)
    return {key.strip().lower().replace("-", "_"): value for key, value in values.items() if value is not None}


def load_run_config(flags: Dict[str, Any], config_file: Optional[Path] = None) -> RunConfig:
    """Merge file values under the explicitly given flags and validate."""
    merged = read_config_file(config_file)
    merged.update({key: value for key, value in flags.items() if value is not None})
    return RunConfig(**merged)
