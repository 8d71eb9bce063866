"""
EM estimation of per-sample isoform proportions and the estimators built on it.

- `avg`: mean of the per-sample estimates,
- `pool`: one EM on the reads of all samples,
- `avg-oracle` / `pool-oracle`: the same restricted to the truly informative samples,
- `msiqa` / `msiqp`: the same restricted to the samples MSIQ calls informative.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from msiq.models import (
    EmConfig,
    EmMonotonicityError,
    EstimatorInputError,
    EstimatorKind,
    EstimatorReport,
    informative_indices,
)
from .read_model import GeneratingMatrix

logger = logging.getLogger(__name__)

MONOTONICITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class EmResult:
    """
    Result of one EM run.

    Attributes:
        tau: estimated isoform proportions
        iterations: number of EM iterations
        loglik: log-likelihood before the first iteration and after each iteration
        converged: True if the tolerance was reached before `max_iter`
    """

    tau: np.ndarray
    iterations: int
    loglik: list[float] = field(default_factory=list)
    converged: bool = True


def _values(matrix: GeneratingMatrix | np.ndarray) -> np.ndarray:
    values = matrix.values if isinstance(matrix, GeneratingMatrix) else matrix
    return np.asarray(values, dtype=np.float64)


def run_em(H_d: GeneratingMatrix | np.ndarray, cfg: EmConfig | None = None) -> EmResult:
    """
    Maximum likelihood isoform proportions of one set of reads.

    Iterates responsibilities `r_ij = h_ij tau_j / sum_k h_ik tau_k` and `tau_j = mean_i r_ij`
    until the log-likelihood `sum_i log sum_j h_ij tau_j` improves by less than `cfg.tol`.

    Raises:
        EstimatorInputError: if there is no read or a read has no positive generating probability
        EmMonotonicityError: if an iteration decreases the log-likelihood
    """
    cfg = cfg or EmConfig()
    h = _values(H_d)
    if h.ndim != 2 or h.shape[0] == 0:
        raise EstimatorInputError("EM needs at least one read")
    if not (h.max(axis=1) > 0).all():
        raise EstimatorInputError("a read has no positive generating probability")

    tau = cfg.initial(h.shape[1])
    previous = float(np.log(h @ tau).sum())
    trace = [previous]
    for iteration in range(1, cfg.max_iter + 1):
        weighted = h * tau
        responsibilities = weighted / weighted.sum(axis=1, keepdims=True)
        tau = responsibilities.mean(axis=0)
        current = float(np.log(h @ tau).sum())
        trace.append(current)
        if current < previous - MONOTONICITY_TOLERANCE * max(1.0, abs(previous)):
            raise EmMonotonicityError(f"log-likelihood decreased from {previous} to {current} at iteration {iteration}")
        if current - previous < cfg.tol:
            return EmResult(tau=tau, iterations=iteration, loglik=trace, converged=True)
        previous = current

    logger.warning(f"EM did not converge in {cfg.max_iter} iterations")
    return EmResult(tau=tau, iterations=cfg.max_iter, loglik=trace, converged=False)


def em_single_sample(H_d: GeneratingMatrix | np.ndarray, cfg: EmConfig | None = None) -> np.ndarray:
    """EM estimate of the isoform proportions of one sample."""
    return run_em(H_d, cfg).tau


def _selected_samples(
    kind: EstimatorKind,
    n_samples: int,
    true_E: Sequence[int] | None,
    theta_hat: Sequence[float] | None,
    threshold: float,
) -> list[int]:
    if kind.is_oracle:
        if true_E is None:
            raise EstimatorInputError(f"{kind.value} needs the true informative indicators")
        if len(true_E) != n_samples:
            raise EstimatorInputError(f"{len(true_E)} indicators for {n_samples} samples")
        samples = [d for d, e in enumerate(true_E) if e]
        if not samples:
            raise EstimatorInputError(f"{kind.value}: no sample is truly informative")
        return samples
    if kind.needs_theta:
        if theta_hat is None:
            raise EstimatorInputError(f"{kind.value} needs the posterior membership probabilities")
        if len(theta_hat) != n_samples:
            raise EstimatorInputError(f"{len(theta_hat)} membership probabilities for {n_samples} samples")
        samples = informative_indices(theta_hat, threshold)
        if not samples:
            best = int(np.argmax(theta_hat))
            logger.warning(f"{kind.value}: no membership probability above {threshold}, using sample {best}")
            samples = [best]
        return samples
    return list(range(n_samples))


def run_estimators(
    kinds: Sequence[EstimatorKind],
    H: Sequence[GeneratingMatrix | np.ndarray],
    cfg: EmConfig | None = None,
    *,
    true_E: Sequence[int] | None = None,
    theta_hat: Sequence[float] | None = None,
    threshold: float = 0.5,
) -> list[EstimatorReport]:
    """
    Run several EM-based estimators on the samples of one gene.

    Each per-sample EM, and each pooled EM on a given set of samples, runs only once.
    Pooled reads are concatenated in sample order, then read order.
    """
    cfg = cfg or EmConfig()
    matrices = [_values(matrix) for matrix in H]
    if not matrices:
        raise EstimatorInputError("no sample")
    per_sample: dict[int, EmResult] = {}
    pooled: dict[tuple[int, ...], EmResult] = {}

    reports: list[EstimatorReport] = []
    for kind in kinds:
        samples = _selected_samples(kind, len(matrices), true_E, theta_hat, threshold)
        if kind.pools_reads:
            key = tuple(samples)
            if key not in pooled:
                pooled[key] = run_em(np.vstack([matrices[d] for d in samples]), cfg)
            results = [pooled[key]]
            alpha_hat = results[0].tau
        else:
            for d in samples:
                if d not in per_sample:
                    per_sample[d] = run_em(matrices[d], cfg)
            results = [per_sample[d] for d in samples]
            alpha_hat = np.mean([result.tau for result in results], axis=0)
        reports.append(
            EstimatorReport(
                kind=kind,
                alpha_hat=alpha_hat.tolist(),
                samples=samples,
                em_iterations=[result.iterations for result in results],
                loglik=[result.loglik[-1] for result in results],
            )
        )
    return reports


def estimate(
    kind: EstimatorKind,
    H: Sequence[GeneratingMatrix | np.ndarray],
    cfg: EmConfig | None = None,
    true_E: Sequence[int] | None = None,
    theta_hat: Sequence[float] | None = None,
    threshold: float = 0.5,
) -> np.ndarray:
    """
    Isoform proportions estimated by one EM-based estimator.

    Args:
        kind: estimator
        H: generating matrix of each sample
        cfg: EM settings
        true_E: true informative indicators, for the oracle estimators
        theta_hat: posterior membership probabilities, for `msiqa` and `msiqp`
        threshold: samples with a membership probability strictly above it are used;
            if there is none, the sample with the highest probability is used

    Raises:
        EstimatorInputError: if a required input is missing or the oracle set is empty
    """
    report = run_estimators([kind], H, cfg, true_E=true_E, theta_hat=theta_hat, threshold=threshold)[0]
    return np.asarray(report.alpha_hat)
