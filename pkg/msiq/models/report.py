"""
Benchmark report models.

The report keeps one row per (gene, scenario, setting, replicate, estimator);
aggregates are always recomputable from the rows.
"""

import math
from operator import attrgetter
from typing import Annotated

from pydantic import BaseModel, Field, NonNegativeFloat, NonNegativeInt, PositiveFloat, PositiveInt

from .inference import Provenance, informative_indices
from .simulation import Scenario


class ReeRow(BaseModel):
    """
    Relative estimation error of one estimator on one simulated gene.

    Attributes:
        gene_id: gene identifier
        scenario: heterogeneity scenario (1-5)
        setting: fragment/read length setting (1-4)
        replicate: replicate index
        estimator: estimator name (`msiq` or an EM-based estimator)
        ree: relative estimation error
        skipped_coordinates: isoforms with a zero true proportion left out of the error
    """

    gene_id: str
    scenario: int
    setting: int
    replicate: int
    estimator: str
    ree: NonNegativeFloat
    skipped_coordinates: NonNegativeInt = 0


class ReeAggregate(BaseModel):
    """Summary of the error of one estimator over all genes of a (scenario, setting) cell."""

    scenario: int
    setting: int
    estimator: str
    n: int
    median: float
    q1: float
    q3: float
    mean: float


class IdentificationRow(BaseModel):
    """
    Informative group identification on one simulated gene.

    Attributes:
        gene_id: gene identifier
        scenario: heterogeneity scenario
        setting: fragment/read length setting
        replicate: replicate index
        true_E: true informative indicators, the ones given to the oracle estimators
        theta_hat: posterior membership probabilities
    """

    gene_id: str
    scenario: int
    setting: int
    replicate: int
    true_E: list[int]
    theta_hat: list[float]

    def identified(self, threshold: float = 0.5) -> bool:
        """True when every sample is on the right side of `threshold`."""
        return informative_indices(self.theta_hat, threshold) == [d for d, e in enumerate(self.true_E) if e]


class SweepFailure(BaseModel):
    """A (gene, scenario, setting, replicate) cell that could not be evaluated."""

    gene_id: str
    scenario: int
    setting: int
    replicate: int
    error: str
    message: str


class ReeReport(BaseModel):
    """
    Result of a benchmark sweep.

    Attributes:
        rows: per-gene errors
        aggregates: median, quartiles and mean per (scenario, setting, estimator)
        identification: per-gene informative group identification
        failures: cells that failed
        provenance: configuration the sweep ran with
    """

    rows: list[ReeRow] = []
    aggregates: list[ReeAggregate] = []
    identification: list[IdentificationRow] = []
    failures: list[SweepFailure] = []
    provenance: Provenance | None = None

    def check_aggregates(self, rel_tol: float = 1e-12) -> bool:
        """True when the stored aggregates match a recomputation from the rows."""
        from msiq.quant_sdk.evaluation import aggregate

        recomputed = aggregate(self.rows)
        if len(recomputed) != len(self.aggregates):
            return False
        key = attrgetter("scenario", "setting", "estimator", "n")
        for stored, fresh in zip(self.aggregates, recomputed):
            if key(stored) != key(fresh):
                return False
            for name in ("median", "q1", "q3", "mean"):
                if not math.isclose(getattr(stored, name), getattr(fresh, name), rel_tol=rel_tol, abs_tol=1e-15):
                    return False
        return True


class SweepConfig(BaseModel):
    """
    Settings of a benchmark sweep.

    Attributes:
        scenarios: heterogeneity scenarios
        settings: fragment/read length settings (1-4)
        replicates: simulated replicates per gene, scenario and setting
        seed: master seed
        D: samples per gene
        n_reads: reads per gene and sample
        frag_sd: fragment length standard deviation (bp)
        lam: Dirichlet prior parameter, scalar or one value per isoform
        a: first Beta prior parameter
        b: second Beta prior parameter
        iterations: retained chain iterations
        burn_in: discarded chain iterations
        em_tol: EM tolerance
        em_max_iter: EM iteration limit
        threshold: membership probability threshold of `msiqa` and `msiqp`
        workers: parallel workers
        fixed_alpha: informative proportions to use instead of random draws
    """

    scenarios: list[Scenario] = list(Scenario)
    settings: list[Annotated[int, Field(ge=1, le=4)]] = [1, 2, 3, 4]
    replicates: PositiveInt = 1
    seed: int = 0
    D: PositiveInt = 10
    n_reads: PositiveInt = 500
    frag_sd: PositiveFloat = 10
    lam: PositiveFloat | list[PositiveFloat] = 1.0
    a: PositiveFloat = 1.0
    b: PositiveFloat = 1.0
    iterations: PositiveInt = 2000
    burn_in: NonNegativeInt = 500
    em_tol: PositiveFloat = 1e-8
    em_max_iter: PositiveInt = 1000
    threshold: float = Field(0.5, ge=0, le=1)
    workers: PositiveInt = 1
    fixed_alpha: list[NonNegativeFloat] | None = None
