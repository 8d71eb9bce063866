"""
Simulation models: heterogeneity scenarios, fragment/read length settings
and the truth recorded next to simulated reads.
"""

from enum import Enum, IntEnum
from typing import Self

from pydantic import BaseModel, Field, PositiveFloat, PositiveInt, model_validator

from .inference import Provenance


class Scenario(IntEnum):
    """Heterogeneity scenarios of the simulation study (10 samples each)."""

    ALL_INFORMATIVE = 1
    HALF_INFORMATIVE = 2
    INDIVIDUAL_OUTLIERS = 3
    DISTANT_OUTLIERS = 4
    CLOSE_OUTLIERS = 5

    @property
    def informative_count(self) -> int:
        """Number of informative samples out of 10."""
        counts = {
            Scenario.ALL_INFORMATIVE: 10,
            Scenario.HALF_INFORMATIVE: 5,
            Scenario.INDIVIDUAL_OUTLIERS: 7,
            Scenario.DISTANT_OUTLIERS: 7,
            Scenario.CLOSE_OUTLIERS: 7,
        }
        return counts[self]

    @property
    def description(self) -> str:
        descriptions = {
            Scenario.ALL_INFORMATIVE: "all samples share alpha",
            Scenario.HALF_INFORMATIVE: "5 samples share alpha, 5 samples have their own proportions",
            Scenario.INDIVIDUAL_OUTLIERS: "7 samples share alpha, 3 samples have their own proportions",
            Scenario.DISTANT_OUTLIERS: "7 samples share alpha, 3 samples share the beta farthest from alpha",
            Scenario.CLOSE_OUTLIERS: "7 samples share alpha, 3 samples share the beta closest to alpha",
        }
        return descriptions[self]


class FragmentSetting(Enum):
    """
    Fragment and read length settings of the simulation study.

    Each member holds the mean fragment length and the read end length (bp).
    """

    SETTING_1 = dict(index=1, frag_mean=150, read_len=50)
    SETTING_2 = dict(index=2, frag_mean=250, read_len=50)
    SETTING_3 = dict(index=3, frag_mean=150, read_len=100)
    SETTING_4 = dict(index=4, frag_mean=250, read_len=100)

    @property
    def index(self) -> int:
        return self.value["index"]

    @property
    def frag_mean(self) -> int:
        return self.value["frag_mean"]

    @property
    def read_len(self) -> int:
        return self.value["read_len"]

    @property
    def label(self) -> str:
        return f"F{self.frag_mean}/R{self.read_len}"

    @classmethod
    def from_index(cls, index: int) -> "FragmentSetting":
        for setting in cls:
            if setting.index == index:
                return setting
        raise ValueError(f"unknown fragment setting {index}, expected 1-4")


class ScenarioSpec(BaseModel):
    """
    One heterogeneity scenario.

    Attributes:
        scenario_id: scenario
        D: number of samples
        informative_count: number of samples sharing alpha (defaults to the scenario's count)
    """

    scenario_id: Scenario
    D: PositiveInt = 10
    informative_count: PositiveInt | None = None

    @model_validator(mode="after")
    def check_counts(self) -> Self:
        if self.informative_count is None:
            self.informative_count = min(self.scenario_id.informative_count, self.D)
        if self.informative_count > self.D:
            raise ValueError(f"informative_count {self.informative_count} exceeds D={self.D}")
        return self

    @property
    def true_E(self) -> list[int]:
        return [1] * self.informative_count + [0] * (self.D - self.informative_count)


class SimConfig(BaseModel):
    """
    Read simulation settings of one sample.

    Attributes:
        n_reads: reads per gene and sample
        frag_mean: mean fragment length (bp)
        frag_sd: fragment length standard deviation (bp)
        read_len: length of each read end (bp)
        seed: seed of the simulation
        strict: fail instead of drawing full-transcript reads when no isoform fits two read ends
    """

    n_reads: PositiveInt = 500
    frag_mean: PositiveFloat = 250
    frag_sd: PositiveFloat = 10
    read_len: PositiveInt = 100
    seed: int = 0
    strict: bool = False

    @classmethod
    def from_setting(cls, setting: FragmentSetting, **kwargs) -> Self:
        return cls(frag_mean=setting.frag_mean, read_len=setting.read_len, **kwargs)


class GeneCorpusConfig(BaseModel):
    """
    Settings of the random gene generator.

    Attributes:
        min_exons: minimum exon count
        max_exons: maximum exon count
        min_exon_length: minimum exon length (bp)
        max_exon_length: maximum exon length (bp)
        min_intron_length: minimum intron length (bp)
        max_intron_length: maximum intron length (bp)
        max_isoforms: maximum number of isoforms per gene
    """

    min_exons: int = Field(3, ge=3)
    max_exons: int = Field(10, ge=3)
    min_exon_length: PositiveInt = 50
    max_exon_length: PositiveInt = 300
    min_intron_length: PositiveInt = 50
    max_intron_length: PositiveInt = 500
    max_isoforms: int = Field(6, ge=2)

    @model_validator(mode="after")
    def check_ranges(self) -> Self:
        if self.min_exons > self.max_exons:
            raise ValueError("min_exons must not exceed max_exons")
        if self.min_exon_length > self.max_exon_length:
            raise ValueError("min_exon_length must not exceed max_exon_length")
        if self.min_intron_length > self.max_intron_length:
            raise ValueError("min_intron_length must not exceed max_intron_length")
        return self


class SimulationTruth(BaseModel):
    """
    Hidden truth of a simulated gene.

    Attributes:
        gene_id: gene identifier
        alpha: isoform proportions of the informative group
        per_sample_tau: isoform proportions of every sample
        true_E: informative group indicators
        true_origins: 0-based isoform origin of every read, per sample
    """

    gene_id: str
    alpha: list[float]
    per_sample_tau: list[list[float]]
    true_E: list[int]
    true_origins: list[list[int]]
    provenance: Provenance | None = None
