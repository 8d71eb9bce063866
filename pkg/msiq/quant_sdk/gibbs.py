"""
Collapsed Gibbs sampling of the multi-sample isoform model.

Isoform proportions of the informative group (alpha) and of the other samples (beta)
are integrated out; the chain runs over the read origins Z, the informative group
indicators E and the informative group proportion gamma.

Up to the constant Beta normalizer of gamma, the collapsed joint is:

    log B(lam + n_I) - log B(lam)
    + sum over samples with E_d = 0 of [log B(lam + n_d) - log B(lam)]
    + sum of log h over assignments
    + (sum E + a - 1) log gamma + (D - sum E + b - 1) log(1 - gamma)

where `B(v) = prod Gamma(v_j) / Gamma(sum v_j)`, `n_d` counts the reads of sample `d`
assigned to each isoform and `n_I` pools these counts over the informative samples.

The sweep kernel is compiled with numba; uniforms are drawn from the chain's numpy
`Generator` and passed to the kernel, so a chain is reproducible from its seed.
"""

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numba
import numpy as np
from scipy.special import betaln, expit, gammaln, logsumexp

from msiq.models import ChainStateError, EnumerationTooLargeError, Hyperparameters, NoUsableReadsError, PosteriorSummary
from .read_model import GeneratingMatrix

logger = logging.getLogger(__name__)

MAX_CONFIGURATIONS = 1_000_000


@numba.njit
def _log_beta_vector(v):
    total = 0.0
    log_gammas = 0.0
    for x in v:
        log_gammas += math.lgamma(x)
        total += x
    return log_gammas - math.lgamma(total)


@numba.njit
def _expit(x):
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


@numba.njit
def _e_log_odds(d, counts, pooled, informative, lam, gamma):
    """Log-odds of E_d = 1 against E_d = 0, everything else fixed."""
    n_d = counts[d]
    base = pooled - n_d if informative[d] == 1 else pooled
    log_odds = (
        _log_beta_vector(lam + base + n_d)
        - _log_beta_vector(lam + base)
        - _log_beta_vector(lam + n_d)
        + _log_beta_vector(lam)
    )
    return log_odds + math.log(gamma) - math.log1p(-gamma)


@numba.njit
def _assignment_weights(h_row, d, counts, pooled, informative, lam):
    """Unnormalized urn weights of a read whose own count has been removed."""
    weights = np.empty(h_row.shape[0])
    for j in range(h_row.shape[0]):
        if informative[d] == 1:
            weights[j] = h_row[j] * (lam[j] + pooled[j])
        else:
            weights[j] = h_row[j] * (lam[j] + counts[d, j])
    return weights


@numba.njit
def _assign(r, d, h, z, counts, pooled, informative, lam, u):
    k = z[r]
    counts[d, k] -= 1
    if informative[d] == 1:
        pooled[k] -= 1

    weights = _assignment_weights(h[r], d, counts, pooled, informative, lam)
    total = weights.sum()
    target = u * total
    chosen = -1
    cumulative = 0.0
    for j in range(weights.shape[0]):
        cumulative += weights[j]
        if weights[j] > 0 and cumulative > target:
            chosen = j
            break
    if chosen < 0:
        # rounding left the target beyond the last positive weight
        for j in range(weights.shape[0] - 1, -1, -1):
            if weights[j] > 0:
                chosen = j
                break

    z[r] = chosen
    counts[d, chosen] += 1
    if informative[d] == 1:
        pooled[chosen] += 1


@numba.njit
def _sweep(h, read_sample, z, counts, pooled, informative, lam, gamma, u_e, u_z):
    """One scan: every E_d in sample order, then every read origin in read order."""
    n_samples = counts.shape[0]
    for d in range(n_samples):
        success = _expit(_e_log_odds(d, counts, pooled, informative, lam, gamma))
        new = 1 if u_e[d] < success else 0
        if new != informative[d]:
            if new == 1:
                pooled += counts[d]
            else:
                pooled -= counts[d]
            informative[d] = new
    for r in range(h.shape[0]):
        _assign(r, read_sample[r], h, z, counts, pooled, informative, lam, u_z[r])


@dataclass
class ChainState:
    """
    State of a collapsed Gibbs chain.

    Attributes:
        z: 0-based isoform origin of every read, samples concatenated
        offsets: first row of each sample in `z` (`D + 1` entries)
        E: informative group indicators
        gamma: informative group proportion
        counts: `D x J` reads per sample and isoform
        pooled: reads per isoform over the informative samples
    """

    z: np.ndarray
    offsets: np.ndarray
    E: np.ndarray
    gamma: float
    counts: np.ndarray
    pooled: np.ndarray

    @classmethod
    def from_assignments(
        cls,
        Z: Sequence[Sequence[int]],
        E: Sequence[int],
        gamma: float,
        n_isoforms: int,
    ) -> "ChainState":
        """Build a state from per-sample origins and recompute its counts."""
        if len(Z) != len(E):
            raise ChainStateError(f"{len(Z)} assignment vectors for {len(E)} samples")
        sizes = [len(z_d) for z_d in Z]
        offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        z = np.concatenate([np.asarray(z_d, dtype=np.int64) for z_d in Z]) if Z else np.zeros(0, dtype=np.int64)
        if z.size and (z.min() < 0 or z.max() >= n_isoforms):
            raise ChainStateError(f"assignments must lie in 0..{n_isoforms - 1}")
        counts = np.zeros((len(Z), n_isoforms), dtype=np.int64)
        for d, z_d in enumerate(Z):
            counts[d] = np.bincount(np.asarray(z_d, dtype=np.int64), minlength=n_isoforms)
        E = np.asarray(E, dtype=np.int64)
        pooled = counts[E == 1].sum(axis=0).astype(np.int64)
        return cls(z=z, offsets=offsets, E=E, gamma=float(gamma), counts=counts, pooled=pooled)

    @property
    def Z(self) -> list[np.ndarray]:
        """Per-sample views of the read origins."""
        return [self.z[self.offsets[d] : self.offsets[d + 1]] for d in range(len(self.offsets) - 1)]

    def copy(self) -> "ChainState":
        return ChainState(
            z=self.z.copy(),
            offsets=self.offsets.copy(),
            E=self.E.copy(),
            gamma=self.gamma,
            counts=self.counts.copy(),
            pooled=self.pooled.copy(),
        )


def _as_values(matrix: GeneratingMatrix | np.ndarray) -> np.ndarray:
    values = matrix.values if isinstance(matrix, GeneratingMatrix) else matrix
    return np.asarray(values, dtype=np.float64)


class CollapsedGibbsSampler:
    """
    Collapsed Gibbs sampler over the reads of one gene in D samples.

    Args:
        H: generating matrix of each sample (all with the same number of columns)
        hyper: prior
    """

    def __init__(self, H: Sequence[GeneratingMatrix | np.ndarray], hyper: Hyperparameters):
        matrices = [_as_values(matrix) for matrix in H]
        n_isoforms = len(hyper.lam)
        for d, values in enumerate(matrices):
            if values.ndim != 2 or values.shape[1] != n_isoforms:
                raise ChainStateError(f"sample {d}: generating matrix shape {values.shape}, expected (n, {n_isoforms})")
            if values.shape[0] and not (values.max(axis=1) > 0).all():
                raise ChainStateError(f"sample {d}: a read has no positive generating probability")
            if (values < 0).any():
                raise ChainStateError(f"sample {d}: negative generating probability")

        self.hyper = hyper
        self.lam = hyper.lam_array
        self.n_samples = len(matrices)
        self.n_isoforms = n_isoforms
        self.sizes = np.array([values.shape[0] for values in matrices], dtype=np.int64)
        self.offsets = np.concatenate([[0], np.cumsum(self.sizes)]).astype(np.int64)
        self.h = np.vstack(matrices) if matrices else np.zeros((0, n_isoforms))
        self.h = np.ascontiguousarray(self.h)
        self.read_sample = np.repeat(np.arange(self.n_samples, dtype=np.int64), self.sizes)

    # State handling

    def initial_state(self, rng: np.random.Generator) -> ChainState:
        """All samples informative, gamma at its prior mean, origins drawn proportionally to h."""
        probabilities = self.h / self.h.sum(axis=1, keepdims=True) if self.h.shape[0] else self.h
        u = rng.random(self.h.shape[0])
        z = np.minimum((probabilities.cumsum(axis=1) <= u[:, None]).sum(axis=1), self.n_isoforms - 1)
        # never start on a zero entry, even after rounding
        for r in np.flatnonzero(self.h[np.arange(z.size), z] <= 0):
            z[r] = int(np.flatnonzero(self.h[r] > 0)[-1])
        Z = [z[self.offsets[d] : self.offsets[d + 1]] for d in range(self.n_samples)]
        gamma = self.hyper.a / (self.hyper.a + self.hyper.b)
        return ChainState.from_assignments(Z, [1] * self.n_samples, gamma, self.n_isoforms)

    def check_state(self, state: ChainState):
        """
        Raises:
            ChainStateError: if the state does not match the data or assigns a read to an isoform with h = 0
        """
        if state.z.shape != (self.h.shape[0],) or not np.array_equal(state.offsets, self.offsets):
            raise ChainStateError("assignments do not match the read counts of the samples")
        if state.E.shape != (self.n_samples,) or not np.isin(state.E, (0, 1)).all():
            raise ChainStateError(f"E must hold {self.n_samples} values in {{0, 1}}")
        if not 0.0 < state.gamma < 1.0:
            raise ChainStateError(f"gamma must lie in (0, 1), got {state.gamma}")
        if state.z.size and (state.z.min() < 0 or state.z.max() >= self.n_isoforms):
            raise ChainStateError(f"assignments must lie in 0..{self.n_isoforms - 1}")
        zero = self.h[np.arange(state.z.size), state.z] <= 0
        if zero.any():
            r = int(np.flatnonzero(zero)[0])
            d = int(self.read_sample[r])
            raise ChainStateError(
                f"read {r - self.offsets[d]} of sample {d} assigned to isoform {state.z[r]} with h = 0"
            )

    # Log densities

    def _log_beta(self, v: np.ndarray) -> float:
        return float(gammaln(v).sum() - gammaln(v.sum()))

    def _log_count_terms(self, counts: np.ndarray, E: np.ndarray) -> float:
        lam = self.lam
        pooled = counts[E == 1].sum(axis=0)
        value = self._log_beta(lam + pooled) - self._log_beta(lam)
        for d in np.flatnonzero(E == 0):
            value += self._log_beta(lam + counts[d]) - self._log_beta(lam)
        return value

    def _log_h(self, state: ChainState) -> float:
        return float(np.log(self.h[np.arange(state.z.size), state.z]).sum())

    def log_joint(self, state: ChainState) -> float:
        self.check_state(state)
        n_informative = int(state.E.sum())
        a, b = self.hyper.a, self.hyper.b
        return (
            self._log_count_terms(state.counts, state.E)
            + self._log_h(state)
            + (n_informative + a - 1) * math.log(state.gamma)
            + (self.n_samples - n_informative + b - 1) * math.log1p(-state.gamma)
        )

    def log_configuration_weight(self, state: ChainState) -> float:
        """Collapsed joint of (Z, E) with gamma integrated out."""
        self.check_state(state)
        n_informative = int(state.E.sum())
        return (
            self._log_count_terms(state.counts, state.E)
            + self._log_h(state)
            + float(betaln(n_informative + self.hyper.a, self.n_samples - n_informative + self.hyper.b))
        )

    # Conditionals

    def e_log_odds(self, state: ChainState, d: int) -> float:
        return float(_e_log_odds(d, state.counts, state.pooled, state.E, self.lam, state.gamma))

    def e_success_probability(self, state: ChainState, d: int) -> float:
        return float(expit(self.e_log_odds(state, d)))

    def z_probabilities(self, state: ChainState, d: int, i: int) -> np.ndarray:
        """Conditional distribution of the origin of read `i` of sample `d`."""
        r = int(self.offsets[d] + i)
        if not 0 <= i < self.sizes[d]:
            raise ChainStateError(f"sample {d} has no read {i}")
        counts = state.counts.copy()
        pooled = state.pooled.copy()
        k = state.z[r]
        counts[d, k] -= 1
        if state.E[d] == 1:
            pooled[k] -= 1
        weights = _assignment_weights(self.h[r], d, counts, pooled, state.E, self.lam)
        return weights / weights.sum()

    def sample_E(self, state: ChainState, d: int, rng: np.random.Generator) -> int:
        new = int(rng.random() < self.e_success_probability(state, d))
        if new != state.E[d]:
            state.pooled += state.counts[d] if new else -state.counts[d]
            state.E[d] = new
        return new

    def sample_Z(self, state: ChainState, d: int, i: int, rng: np.random.Generator) -> int:
        if not 0 <= i < self.sizes[d]:
            raise ChainStateError(f"sample {d} has no read {i}")
        r = int(self.offsets[d] + i)
        _assign(r, d, self.h, state.z, state.counts, state.pooled, state.E, self.lam, rng.random())
        return int(state.z[r])

    def sample_gamma(self, state: ChainState, rng: np.random.Generator) -> float:
        n_informative = int(state.E.sum())
        state.gamma = float(rng.beta(n_informative + self.hyper.a, self.n_samples - n_informative + self.hyper.b))
        return state.gamma

    def sweep(self, state: ChainState, rng: np.random.Generator):
        """Update every E_d, then every read origin, then gamma."""
        u_e = rng.random(self.n_samples)
        u_z = rng.random(self.h.shape[0])
        _sweep(self.h, self.read_sample, state.z, state.counts, state.pooled, state.E, self.lam, state.gamma, u_e, u_z)
        self.sample_gamma(state, rng)

    def alpha(self, state: ChainState) -> np.ndarray:
        """Posterior mean of alpha given the state; the prior mean when no sample is informative."""
        if not state.pooled.any():
            return self.hyper.prior_mean
        weights = self.lam + state.pooled
        return weights / weights.sum()

    # Chain

    def run(
        self,
        T: int = 2000,
        burn_in: int = 500,
        seed: int | None = 0,
        *,
        keep_trace: bool = False,
        check: bool = False,
    ) -> PosteriorSummary:
        """
        Run a chain and average its retained iterations.

        Args:
            T: retained iterations
            burn_in: discarded iterations
            seed: chain seed
            keep_trace: keep the per-iteration alpha
            check: verify the state invariants after every sweep

        Returns:
            Posterior summary.
        """
        if T < 1:
            raise ChainStateError(f"iterations must be at least 1, got {T}")
        if burn_in < 0:
            raise ChainStateError(f"burn-in must not be negative, got {burn_in}")
        empty = np.flatnonzero(self.sizes == 0)
        if empty.size:
            raise NoUsableReadsError(f"samples {empty.tolist()} have no read")

        rng = np.random.default_rng(seed)
        state = self.initial_state(rng)
        alpha_sum = np.zeros(self.n_isoforms)
        theta_sum = np.zeros(self.n_samples)
        trace: list[list[float]] = []
        for t in range(burn_in + T):
            self.sweep(state, rng)
            if check:
                self.check_state(state)
            if t < burn_in:
                continue
            alpha = self.alpha(state)
            alpha_sum += alpha
            theta_sum += state.E
            if keep_trace:
                trace.append(alpha.tolist())

        alpha_hat = alpha_sum / T
        alpha_hat /= alpha_hat.sum()
        theta_hat = theta_sum / T
        logger.debug(f"chain done: alpha_hat={alpha_hat.round(4).tolist()} theta_hat={theta_hat.round(3).tolist()}")
        return PosteriorSummary(
            alpha_hat=alpha_hat.tolist(),
            theta_hat=theta_hat.tolist(),
            iterations=T,
            burn_in=burn_in,
            seed=seed,
            per_iteration_alpha=trace if keep_trace else None,
        )

    # Exact enumeration

    def configuration_count(self) -> int:
        """Number of (Z, E) configurations with a positive weight."""
        supports = int(np.prod((self.h > 0).sum(axis=1), dtype=object)) if self.h.shape[0] else 1
        return supports * 2**self.n_samples

    def _sample_count_weights(self, d: int) -> dict[tuple[int, ...], float]:
        """Log of the summed generating probabilities of the assignments of sample `d`, per count vector."""
        rows = self.h[self.offsets[d] : self.offsets[d + 1]]
        log_rows = [
            [(j, math.log(rows[i, j])) for j in range(self.n_isoforms) if rows[i, j] > 0] for i in range(len(rows))
        ]
        terms: dict[tuple[int, ...], list[float]] = {}
        for assignment in itertools.product(*log_rows):
            counts = [0] * self.n_isoforms
            for j, _ in assignment:
                counts[j] += 1
            terms.setdefault(tuple(counts), []).append(sum(value for _, value in assignment))
        return {counts: float(logsumexp(values)) for counts, values in terms.items()}

    def exact_posterior(self, max_configurations: int = MAX_CONFIGURATIONS) -> tuple[np.ndarray, np.ndarray]:
        """
        Posterior mean of alpha and posterior membership probabilities by full enumeration.

        Assignments of each sample are grouped by count vector, gamma is integrated analytically
        and alpha is averaged through its conditional posterior mean.

        Raises:
            EnumerationTooLargeError: if the number of configurations exceeds `max_configurations`
        """
        count = self.configuration_count()
        if count > max_configurations:
            raise EnumerationTooLargeError(f"{count} configurations, at most {max_configurations} allowed")

        per_sample = [list(self._sample_count_weights(d).items()) for d in range(self.n_samples)]
        log_weights: list[float] = []
        alphas: list[np.ndarray] = []
        indicators: list[tuple[int, ...]] = []
        lam = self.lam
        log_beta_lam = self._log_beta(lam)
        for E in itertools.product((0, 1), repeat=self.n_samples):
            n_informative = sum(E)
            log_gamma_part = float(betaln(n_informative + self.hyper.a, self.n_samples - n_informative + self.hyper.b))
            for choice in itertools.product(*per_sample):
                pooled = np.zeros(self.n_isoforms)
                value = log_gamma_part
                for e_d, (counts, log_h) in zip(E, choice):
                    value += log_h
                    if e_d:
                        pooled += counts
                    else:
                        value += self._log_beta(lam + np.asarray(counts)) - log_beta_lam
                value += self._log_beta(lam + pooled) - log_beta_lam
                log_weights.append(value)
                alphas.append((lam + pooled) / (lam.sum() + pooled.sum()))
                indicators.append(E)

        log_weights = np.asarray(log_weights)
        weights = np.exp(log_weights - logsumexp(log_weights))
        alpha = weights @ np.asarray(alphas)
        theta = weights @ np.asarray(indicators, dtype=np.float64).reshape(len(weights), self.n_samples)
        return alpha / alpha.sum(), theta


def log_collapsed_joint(state: ChainState, H: Sequence[GeneratingMatrix | np.ndarray], hyper: Hyperparameters) -> float:
    """
    Log of the collapsed joint density of (R, Z, E, gamma), without the Beta normalizer of gamma.

    Raises:
        ChainStateError: on inconsistent dimensions or an assignment with h = 0
    """
    return CollapsedGibbsSampler(H, hyper).log_joint(state)


def log_configuration_weight(
    state: ChainState, H: Sequence[GeneratingMatrix | np.ndarray], hyper: Hyperparameters
) -> float:
    """`log_collapsed_joint` integrated over gamma."""
    return CollapsedGibbsSampler(H, hyper).log_configuration_weight(state)


def e_success_probability(
    state: ChainState, d: int, H: Sequence[GeneratingMatrix | np.ndarray], hyper: Hyperparameters
) -> float:
    """Conditional probability that sample `d` is informative."""
    return CollapsedGibbsSampler(H, hyper).e_success_probability(state, d)


def sample_E(
    state: ChainState,
    d: int,
    H: Sequence[GeneratingMatrix | np.ndarray],
    hyper: Hyperparameters,
    rng: np.random.Generator,
) -> int:
    """Draw E_d from its conditional distribution; `state` is updated in place."""
    return CollapsedGibbsSampler(H, hyper).sample_E(state, d, rng)


def z_probabilities(
    state: ChainState, d: int, i: int, H: Sequence[GeneratingMatrix | np.ndarray], hyper: Hyperparameters
) -> np.ndarray:
    """Conditional distribution over the isoforms of the origin of read `i` in sample `d`."""
    return CollapsedGibbsSampler(H, hyper).z_probabilities(state, d, i)


def sample_Z(
    state: ChainState,
    d: int,
    i: int,
    H: Sequence[GeneratingMatrix | np.ndarray],
    hyper: Hyperparameters,
    rng: np.random.Generator,
) -> int:
    """Draw the origin of read `i` in sample `d`; `state` is updated in place."""
    return CollapsedGibbsSampler(H, hyper).sample_Z(state, d, i, rng)


def sample_gamma(state: ChainState, hyper: Hyperparameters, rng: np.random.Generator) -> float:
    """Draw gamma from Beta(sum E + a, D - sum E + b); `state` is updated in place."""
    n_samples = len(state.E)
    n_informative = int(np.sum(state.E))
    state.gamma = float(rng.beta(n_informative + hyper.a, n_samples - n_informative + hyper.b))
    return state.gamma


def run_chain(
    H: Sequence[GeneratingMatrix | np.ndarray],
    hyper: Hyperparameters,
    T: int = 2000,
    burn_in: int = 500,
    seed: int | None = 0,
    *,
    keep_trace: bool = False,
    check: bool = False,
) -> PosteriorSummary:
    """
    Run a collapsed Gibbs chain and return the MSIQ estimate.

    Each sweep updates every E_d in sample order, every read origin in read order, then gamma.
    The estimate averages, over the retained iterations, the posterior mean of alpha given
    the pooled counts of the informative samples.

    Raises:
        NoUsableReadsError: if a sample has no read
        ChainStateError: on negative iteration counts
    """
    return CollapsedGibbsSampler(H, hyper).run(T, burn_in, seed, keep_trace=keep_trace, check=check)


def exact_posterior(
    H: Sequence[GeneratingMatrix | np.ndarray],
    hyper: Hyperparameters,
    max_configurations: int = MAX_CONFIGURATIONS,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Exact posterior mean of alpha and membership probabilities of every sample.

    Raises:
        EnumerationTooLargeError: above `max_configurations` configurations
    """
    return CollapsedGibbsSampler(H, hyper).exact_posterior(max_configurations)
