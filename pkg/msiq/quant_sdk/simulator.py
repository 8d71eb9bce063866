"""
Paired-end read simulation.

Proportions are drawn from a flat Dirichlet, samples are given proportions according
to a heterogeneity scenario, and reads are drawn with a uniform start position and a
Gaussian fragment length.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from msiq.models import (
    GeneCorpusConfig,
    GeneModel,
    GenomicInterval,
    Scenario,
    ScenarioError,
    ScenarioSpec,
    SimConfig,
    SimulationError,
    SimulationTruth,
    SummarizedRead,
)
from .gene_model import derive_subexons
from .read_model import GeneIndex, summarize_read

logger = logging.getLogger(__name__)

N_BETAS = 5


def _normalized(draw: np.ndarray) -> np.ndarray:
    # numpy Dirichlet draws can miss the simplex by one ulp
    return draw / draw.sum()


def gen_proportions(J: int, rng: np.random.Generator) -> tuple[np.ndarray, list[np.ndarray]]:
    """
    Draw the informative proportions and five alternative proportion vectors.

    Returns:
        alpha and beta_1..beta_5, all drawn independently from Dirichlet(1, ..., 1).
    """
    if J < 1:
        raise ScenarioError(f"at least one isoform is needed, got {J}")
    ones = np.ones(J)
    alpha = _normalized(rng.dirichlet(ones))
    betas = [_normalized(rng.dirichlet(ones)) for _ in range(N_BETAS)]
    return alpha, betas


def make_scenario(spec: ScenarioSpec, alpha: Sequence[float], betas: Sequence[Sequence[float]]) -> list[np.ndarray]:
    """
    Proportions of every sample in a heterogeneity scenario.

    The first `informative_count` samples get `alpha`. The others get, depending on the scenario:

    1. `alpha` as well,
    2. and 3. one distinct beta each, in order,
    4. the beta farthest from `alpha` (squared euclidean distance),
    5. the beta closest to `alpha`.

    Raises:
        ScenarioError: if fewer than five betas are given or there are not enough betas for the outliers
    """
    if len(betas) < N_BETAS:
        raise ScenarioError(f"{N_BETAS} beta vectors are needed, got {len(betas)}")
    alpha = np.asarray(alpha, dtype=np.float64)
    betas = [np.asarray(beta, dtype=np.float64) for beta in betas]
    n_outliers = spec.D - spec.informative_count

    match spec.scenario_id:
        case Scenario.ALL_INFORMATIVE:
            return [alpha.copy() for _ in range(spec.D)]
        case Scenario.HALF_INFORMATIVE | Scenario.INDIVIDUAL_OUTLIERS:
            if n_outliers > len(betas):
                raise ScenarioError(f"{n_outliers} outlier samples but only {len(betas)} beta vectors")
            outliers = [betas[k].copy() for k in range(n_outliers)]
        case Scenario.DISTANT_OUTLIERS | Scenario.CLOSE_OUTLIERS:
            distances = [float(np.sum((beta - alpha) ** 2)) for beta in betas]
            pick = np.argmax(distances) if spec.scenario_id == Scenario.DISTANT_OUTLIERS else np.argmin(distances)
            outliers = [betas[int(pick)].copy() for _ in range(n_outliers)]
        case _:
            raise ScenarioError(f"unknown scenario {spec.scenario_id}")

    return [alpha.copy() for _ in range(spec.informative_count)] + outliers


@dataclass(frozen=True)
class SimulatedReads:
    """
    Reads simulated from one sample.

    Attributes:
        reads: summarized reads
        origins: 0-based isoform each read was drawn from
        fragment_lengths: fragment length of each read
        full_transcript: reads drawn from a whole isoform shorter than two read ends
    """

    reads: list[SummarizedRead]
    origins: np.ndarray
    fragment_lengths: np.ndarray
    full_transcript: np.ndarray


def simulate_reads(
    gene: GeneModel | GeneIndex,
    tau: Sequence[float],
    cfg: SimConfig,
    rng: np.random.Generator,
    *,
    read_prefix: str = "r",
) -> SimulatedReads:
    """
    Simulate the paired-end reads of one gene in one sample.

    For each read: the isoform is drawn from `tau`, the fragment length from a rounded
    normal clamped to `[2 * read_len, isoform length]`, the start uniformly among the
    positions where the fragment fits. The two ends are the first and last `read_len`
    transcript positions of the fragment, mapped back to the genome. An isoform shorter
    than two read ends yields the whole transcript with ends of half its length.

    Raises:
        SimulationError: in strict mode, if every isoform is shorter than two read ends
    """
    index = gene if isinstance(gene, GeneIndex) else GeneIndex(gene)
    gene = index.gene
    tau = np.asarray(tau, dtype=np.float64)
    if tau.shape != (gene.n_isoforms,) or (tau < 0).any():
        raise SimulationError(f"{gene.gene_id}: tau must hold {gene.n_isoforms} non-negative proportions")
    lengths = np.asarray(index.lengths)
    c = cfg.read_len
    if cfg.strict and (lengths < 2 * c).all():
        raise SimulationError(f"{gene.gene_id}: every isoform is shorter than two read ends of {c} bp")

    n = cfg.n_reads
    origins = rng.choice(gene.n_isoforms, size=n, p=tau / tau.sum())
    raw_lengths = np.rint(rng.normal(cfg.frag_mean, cfg.frag_sd, size=n)).astype(np.int64)
    u_start = rng.random(n)

    reads: list[SummarizedRead] = []
    fragment_lengths = np.empty(n, dtype=np.int64)
    full_transcript = np.zeros(n, dtype=bool)
    for i, j in enumerate(origins):
        length = int(lengths[j])
        if length < 2 * c:
            full_transcript[i] = True
            fragment, end_length, start = length, max(length // 2, 1), 1
        else:
            fragment = int(min(max(raw_lengths[i], 2 * c), length))
            end_length = c
            start = 1 + int(u_start[i] * (length - fragment + 1))
        last = start + fragment - 1
        left = index.genomic_positions(j, start, start + end_length - 1)
        right = index.genomic_positions(j, last - end_length + 1, last)
        reads.append(summarize_read(left, right, index, read_id=f"{read_prefix}{i + 1}"))
        fragment_lengths[i] = fragment

    if full_transcript.any():
        logger.debug(f"{gene.gene_id}: {int(full_transcript.sum())} full-transcript reads from short isoforms")
    return SimulatedReads(
        reads=reads,
        origins=origins.astype(np.int64),
        fragment_lengths=fragment_lengths,
        full_transcript=full_transcript,
    )


def simulate_gene(
    gene: GeneModel,
    spec: ScenarioSpec,
    cfg: SimConfig,
    rng: np.random.Generator,
    *,
    fixed_alpha: Sequence[float] | None = None,
) -> tuple[SimulationTruth, list[SimulatedReads]]:
    """
    Simulate every sample of one gene in a scenario.

    Args:
        gene: gene model
        spec: heterogeneity scenario
        cfg: read simulation settings
        rng: random generator of the gene
        fixed_alpha: informative proportions to use instead of a random draw

    Returns:
        The hidden truth and the reads of each sample.
    """
    alpha, betas = gen_proportions(gene.n_isoforms, rng)
    if fixed_alpha is not None:
        alpha = np.asarray(fixed_alpha, dtype=np.float64)
        if alpha.shape != (gene.n_isoforms,):
            raise ScenarioError(f"{gene.gene_id}: fixed alpha has {alpha.size} entries for {gene.n_isoforms} isoforms")
    taus = make_scenario(spec, alpha, betas)
    index = GeneIndex(gene)
    samples = [simulate_reads(index, tau, cfg, rng) for tau in taus]
    truth = SimulationTruth(
        gene_id=gene.gene_id,
        alpha=alpha.tolist(),
        per_sample_tau=[tau.tolist() for tau in taus],
        true_E=spec.true_E,
        true_origins=[sample.origins.tolist() for sample in samples],
    )
    return truth, samples


def random_gene(gene_id: str, rng: np.random.Generator, cfg: GeneCorpusConfig | None = None) -> GeneModel:
    """
    Draw a random multi-isoform gene.

    Exon and intron lengths are uniform in their configured ranges. Isoforms are distinct
    random subsets of the exons that always keep the first and last exon.
    """
    cfg = cfg or GeneCorpusConfig()
    n_exons = int(rng.integers(cfg.min_exons, cfg.max_exons + 1))
    exon_lengths = rng.integers(cfg.min_exon_length, cfg.max_exon_length + 1, size=n_exons)
    intron_lengths = rng.integers(cfg.min_intron_length, cfg.max_intron_length + 1, size=n_exons - 1)

    exons: list[GenomicInterval] = []
    start = 1
    for k, length in enumerate(exon_lengths):
        exons.append(GenomicInterval(start, start + int(length) - 1))
        if k < n_exons - 1:
            start += int(length) + int(intron_lengths[k])

    n_target = min(int(rng.integers(2, cfg.max_isoforms + 1)), 2 ** (n_exons - 2))
    chosen: list[tuple[int, ...]] = []
    for _ in range(100 * n_target):
        if len(chosen) == n_target:
            break
        inner = tuple(k for k in range(1, n_exons - 1) if rng.random() < 0.5)
        subset = (0, *inner, n_exons - 1)
        if subset not in chosen:
            chosen.append(subset)

    return derive_subexons(
        [[exons[k] for k in subset] for subset in chosen],
        gene_id=gene_id,
        isoform_ids=[f"{gene_id}.{n + 1}" for n in range(len(chosen))],
    )


def random_corpus(n: int, seed: int = 0, cfg: GeneCorpusConfig | None = None) -> list[GeneModel]:
    """`n` random genes named `gene0001`, `gene0002`, ..., each drawn from its own seed stream."""
    streams = np.random.SeedSequence(seed).spawn(n)
    return [random_gene(f"gene{k + 1:04d}", np.random.default_rng(stream), cfg) for k, stream in enumerate(streams)]
