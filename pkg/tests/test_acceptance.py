"""
Long statistical checks of the estimator on simulated data.

Deselect with `pytest -m "not slow"`.
"""

import numpy as np
import pytest

from msiq.models import FragmentLengthModel, Hyperparameters, ReeReport, ScenarioSpec, SimConfig, SweepConfig
from msiq.quant_sdk import (
    GeneIndex,
    derive_subexons,
    exact_posterior,
    generating_matrix,
    identification_rate,
    median_ree,
    random_corpus,
    run_chain,
    simulate_gene,
    sweep,
)
from tests.util import random_instance

pytestmark = pytest.mark.slow

BENCHMARK = dict(
    scenarios=[2, 3, 4, 5],
    settings=[1, 2],
    n_reads=500,
    iterations=500,
    burn_in=200,
    seed=2024,
    workers=4,
)
IDENTIFICATION = dict(
    scenarios=[4],
    settings=[4],
    n_reads=500,
    iterations=2000,
    burn_in=500,
    seed=2024,
    workers=4,
)


@pytest.fixture(scope="module")
def benchmark() -> ReeReport:
    return sweep(random_corpus(50, seed=2024), SweepConfig(**BENCHMARK))


def test_chain_matches_enumeration():
    rng = np.random.default_rng(7)
    for k in range(20):
        J = int(rng.integers(2, 4))
        D = int(rng.integers(1, 4))
        sizes = rng.integers(1, 5 if J == 2 else 4, size=D).tolist()
        H, _, hyper = random_instance(rng, sizes, J)
        alpha, theta = exact_posterior(H, hyper)
        summary = run_chain(H, hyper, T=50_000, burn_in=1000, seed=k)
        assert np.max(np.abs(np.asarray(summary.alpha_hat) - alpha)) < 0.02
        assert np.max(np.abs(np.asarray(summary.theta_hat) - theta)) < 0.03


def test_consistency_with_shared_proportions():
    gene = derive_subexons([[(1, 500), (601, 1000), (1101, 1500)], [(1, 500), (1101, 1500)]], gene_id="two")
    index = GeneIndex(gene)
    cfg = SimConfig(n_reads=500, frag_mean=250, frag_sd=10, read_len=100)
    flm = FragmentLengthModel(mean=250, sd=10)
    hyper = Hyperparameters.broadcast(1.0, 2)
    close = 0
    for replicate in range(100):
        rng = np.random.default_rng([17, replicate])
        _, samples = simulate_gene(gene, ScenarioSpec(scenario_id=1), cfg, rng, fixed_alpha=[0.6, 0.4])
        H = [generating_matrix(sample.reads, index, flm) for sample in samples]
        summary = run_chain(H, hyper, T=300, burn_in=100, seed=replicate)
        close += np.max(np.abs(np.asarray(summary.alpha_hat) - [0.6, 0.4])) < 0.05
    assert close >= 95


def test_benchmark_has_no_failures(benchmark):
    # EM log-likelihood decreases would be recorded as failures
    assert benchmark.failures == []
    assert benchmark.check_aggregates()


@pytest.mark.parametrize("scenario", [2, 3, 4, 5])
def test_msiq_beats_averaging_and_pooling(benchmark, scenario):
    msiq = median_ree(benchmark, scenario, 1, "msiq")
    assert msiq < median_ree(benchmark, scenario, 1, "avg")
    assert msiq < median_ree(benchmark, scenario, 1, "pool")


def test_half_informative_gap(benchmark):
    msiq = median_ree(benchmark, 2, 1, "msiq")
    assert median_ree(benchmark, 2, 1, "avg") >= 2 * msiq
    assert median_ree(benchmark, 2, 1, "pool") >= 2 * msiq


def test_longer_fragments_help(benchmark):
    def pooled_median(setting: int) -> float:
        return float(np.median([row.ree for row in benchmark.rows if row.estimator == "msiq" and row.setting == setting]))

    assert pooled_median(2) <= 0.95 * pooled_median(1)


def test_distant_outliers_are_identified():
    # frag 250 / read 100, default chain length
    report = sweep(random_corpus(50, seed=2024), SweepConfig(**IDENTIFICATION))
    assert report.failures == []
    assert identification_rate(report, 4, 4) >= 0.9
