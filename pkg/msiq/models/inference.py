"""
Inference models: priors, chain summaries, EM configuration and estimator results.
"""

import math
from collections.abc import Sequence
from enum import Enum
from typing import Any, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveFloat, PositiveInt, model_validator

from .errors import ChainStateError, EstimatorInputError


def informative_indices(theta_hat: Sequence[float], threshold: float = 0.5) -> list[int]:
    """Indices of the samples whose membership probability is strictly above `threshold`."""
    return [d for d, theta in enumerate(theta_hat) if theta > threshold]


class Hyperparameters(BaseModel):
    """
    Prior of the joint model.

    Attributes:
        lam: Dirichlet parameter of the isoform proportions (one entry per isoform)
        a: first Beta parameter of the informative group proportion
        b: second Beta parameter of the informative group proportion
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: tuple[PositiveFloat, ...] = Field(alias="lambda", min_length=1)
    a: PositiveFloat = 1.0
    b: PositiveFloat = 1.0

    @classmethod
    def broadcast(cls, lam: float | list[float], n_isoforms: int, a: float = 1.0, b: float = 1.0) -> Self:
        """
        Build the prior of a gene with `n_isoforms` isoforms.

        A scalar `lam` is repeated for every isoform, a vector must have one entry per isoform.

        Raises:
            ChainStateError: if a vector `lam` does not have one entry per isoform
        """
        if isinstance(lam, int | float):
            values = (float(lam),) * n_isoforms
        elif len(lam) == 1:
            values = (float(lam[0]),) * n_isoforms
        elif len(lam) == n_isoforms:
            values = tuple(float(v) for v in lam)
        else:
            raise ChainStateError(f"lambda has {len(lam)} entries but the gene has {n_isoforms} isoforms")
        return cls(lam=values, a=a, b=b)

    @property
    def lam_array(self) -> np.ndarray:
        return np.asarray(self.lam, dtype=np.float64)

    @property
    def prior_mean(self) -> np.ndarray:
        lam = self.lam_array
        return lam / lam.sum()


class PosteriorSummary(BaseModel):
    """
    Result of a collapsed Gibbs chain.

    Attributes:
        alpha_hat: MSIQ estimate of the informative group isoform proportions
        theta_hat: per-sample posterior probability of belonging to the informative group
        iterations: number of retained iterations
        burn_in: number of discarded iterations
        seed: seed of the chain
        per_iteration_alpha: optional trace of the per-iteration proportions
    """

    alpha_hat: list[float]
    theta_hat: list[float]
    iterations: PositiveInt
    burn_in: NonNegativeInt
    seed: int | None = None
    per_iteration_alpha: list[list[float]] | None = None

    @model_validator(mode="after")
    def check_ranges(self) -> Self:
        if not math.isclose(sum(self.alpha_hat), 1.0, rel_tol=0.0, abs_tol=1e-9):
            raise ValueError(f"alpha_hat must sum to 1, got {sum(self.alpha_hat)}")
        if any(not 0.0 <= t <= 1.0 for t in self.theta_hat):
            raise ValueError(f"theta_hat values must be in [0, 1], got {self.theta_hat}")
        return self

    def informative_samples(self, threshold: float = 0.5) -> list[int]:
        """Indices of the samples whose membership probability is strictly above `threshold`."""
        return informative_indices(self.theta_hat, threshold)


class EmConfig(BaseModel):
    """
    EM settings.

    Attributes:
        tol: stop when the log-likelihood improves by less than this value
        max_iter: maximum number of iterations
        init: initial proportions, uniform if not set
    """

    tol: PositiveFloat = 1e-8
    max_iter: PositiveInt = 1000
    init: tuple[float, ...] | None = None

    @model_validator(mode="after")
    def check_init(self) -> Self:
        if self.init is not None:
            if any(v < 0 for v in self.init) or not math.isclose(sum(self.init), 1.0, abs_tol=1e-9):
                raise ValueError(f"init must lie on the simplex, got {self.init}")
        return self

    def initial(self, n_isoforms: int) -> np.ndarray:
        """
        Starting proportions of an EM run.

        Raises:
            EstimatorInputError: if `init` does not have one entry per isoform
        """
        if self.init is None:
            return np.full(n_isoforms, 1.0 / n_isoforms)
        if len(self.init) != n_isoforms:
            raise EstimatorInputError(f"init has {len(self.init)} entries but the gene has {n_isoforms} isoforms")
        return np.asarray(self.init, dtype=np.float64)


class EstimatorKind(Enum):
    """EM-based estimators compared with MSIQ."""

    AVG = "avg"
    AVG_ORACLE = "avg-oracle"
    POOL = "pool"
    POOL_ORACLE = "pool-oracle"
    MSIQA = "msiqa"
    MSIQP = "msiqp"

    @property
    def is_oracle(self) -> bool:
        return self in (EstimatorKind.AVG_ORACLE, EstimatorKind.POOL_ORACLE)

    @property
    def needs_theta(self) -> bool:
        return self in (EstimatorKind.MSIQA, EstimatorKind.MSIQP)

    @property
    def pools_reads(self) -> bool:
        return self in (EstimatorKind.POOL, EstimatorKind.POOL_ORACLE, EstimatorKind.MSIQP)


class EstimatorReport(BaseModel):
    """
    Result of one EM-based estimator.

    Attributes:
        kind: estimator
        alpha_hat: estimated isoform proportions
        samples: indices of the samples the estimator used
        em_iterations: iteration count of every EM run involved
        loglik: final log-likelihood of every EM run involved
    """

    kind: EstimatorKind
    alpha_hat: list[float]
    samples: list[int]
    em_iterations: list[int]
    loglik: list[float]


class Provenance(BaseModel):
    """
    Provenance header embedded in every output file.

    Attributes:
        tool: producing tool
        version: package version
        command: subcommand
        config: fully resolved configuration, seed included
    """

    tool: str = "msiq-quant"
    version: str
    command: str
    config: dict[str, Any]


class GeneResult(BaseModel):
    """
    Per-gene output of the `estimate` command.

    Attributes:
        gene_id: gene identifier
        alpha_hat: MSIQ estimate (absent when MSIQ was not requested)
        theta_hat: posterior membership probabilities (absent when MSIQ was not requested)
        iterations: retained chain iterations
        burn_in: discarded chain iterations
        seed: chain seed
        dropped_reads: unmappable reads and reads compatible with no isoform, over all samples
        estimators: EM-based estimator results
    """

    gene_id: str
    alpha_hat: list[float] | None = None
    theta_hat: list[float] | None = None
    iterations: int
    burn_in: int
    seed: int
    dropped_reads: int
    estimators: list[EstimatorReport] = []
    provenance: Provenance | None = None
