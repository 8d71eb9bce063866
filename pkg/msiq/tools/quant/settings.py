from pathlib import Path
from typing import Annotated, Any

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

import msiq
from msiq.models import EmConfig, Provenance, Scenario


def parse_float_list(value: str) -> float | list[float]:
    """Parse `1.5` as a scalar and `1,2,3` as a list."""
    values = [float(v) for v in value.split(",") if v.strip()]
    if not values:
        raise ValueError(f"no value in '{value}'")
    return values[0] if len(values) == 1 else values


def parse_int_list(value: str) -> list[int]:
    return [int(v) for v in value.split(",") if v.strip()]


class CliConfig(BaseSettings):
    """
    Resolved configuration of a `msiq-quant` command.

    Only the fields a command sets end up in the provenance header of its output files.
    """

    model_config = SettingsConfigDict(env_prefix="msiq_", populate_by_name=True)

    command: str
    annotation: Path | None = None
    reads_dir: Path | None = None
    out: Path | None = None
    truth_dir: Path | None = None
    fraglen_model: Path | None = None
    methods: list[str] = ["msiq"]
    iterations: Annotated[int, Field(ge=1, description="Retained Gibbs iterations")] = 2000
    burn_in: Annotated[int, Field(ge=0, description="Discarded Gibbs iterations")] = 500
    seed: int = 0
    lam: Annotated[float | list[float], Field(alias="lambda", description="Dirichlet prior parameter")] = 1.0
    a: Annotated[float, Field(gt=0)] = 1.0
    b: Annotated[float, Field(gt=0)] = 1.0
    frag_mean: Annotated[float, Field(gt=0)] = 250
    frag_sd: Annotated[float, Field(gt=0)] = 10
    read_len: Annotated[int, Field(ge=1)] = 100
    n_reads: Annotated[int, Field(ge=1)] = 500
    n_genes: Annotated[int, Field(ge=1)] = 50
    scenario: Scenario = Scenario.ALL_INFORMATIVE
    scenarios: list[Scenario] = list(Scenario)
    settings: list[Annotated[int, Field(ge=1, le=4)]] = [1, 2, 3, 4]
    replicates: Annotated[int, Field(ge=1)] = 1
    threshold: Annotated[float, Field(ge=0, le=1)] = 0.5
    workers: Annotated[int, Field(ge=1)] = 1
    em_tol: Annotated[float, Field(gt=0)] = 1e-8
    em_max_iter: Annotated[int, Field(ge=1)] = 1000
    strict: bool = False

    @field_validator("lam", mode="before")
    @classmethod
    def parse_lambda(cls, value: Any) -> Any:
        if isinstance(value, str):
            return parse_float_list(value)
        return value

    @field_validator("lam")
    @classmethod
    def check_lambda(cls, value: float | list[float]) -> float | list[float]:
        values = value if isinstance(value, list) else [value]
        if any(v <= 0 for v in values):
            raise ValueError(f"lambda values must be positive, got {value}")
        return value

    @field_validator("scenarios", "settings", mode="before")
    @classmethod
    def parse_lists(cls, value: Any) -> Any:
        if isinstance(value, str):
            return parse_int_list(value)
        return value

    @model_validator(mode="after")
    def check_frag_model(self):
        if self.fraglen_model is not None and not self.fraglen_model.is_file():
            raise ValueError(f"fragment length model {self.fraglen_model} not found")
        return self

    @property
    def em_config(self) -> EmConfig:
        return EmConfig(tol=self.em_tol, max_iter=self.em_max_iter)

    def provenance(self) -> Provenance:
        """Provenance header; the worker count is left out since it never changes the results."""
        config = self.model_dump(mode="json", exclude_unset=True, exclude={"command", "workers"}, by_alias=True)
        return Provenance(version=msiq.__version__, command=self.command, config=config)
