import numpy as np
import pytest
from scipy import stats

from msiq.models import Scenario, ScenarioError, ScenarioSpec, SimConfig, SimulationError
from msiq.quant_sdk import (
    GeneIndex,
    compatible_isoforms,
    derive_subexons,
    fragment_length,
    gen_proportions,
    make_scenario,
    random_corpus,
    random_gene,
    simulate_gene,
    simulate_reads,
)
from msiq.quant_sdk.gene_model import isoform_lengths


class TestGenProportions:
    def test_single_isoform(self, rng):
        alpha, betas = gen_proportions(1, rng)
        assert alpha.tolist() == [1.0]
        assert [beta.tolist() for beta in betas] == [[1.0]] * 5

    def test_single_isoform_is_exactly_one(self, rng):
        for _ in range(2000):
            alpha, betas = gen_proportions(1, rng)
            assert all(vector[0] == 1.0 for vector in [alpha, *betas])

    def test_simplex(self, rng):
        for J in (2, 3, 7):
            alpha, betas = gen_proportions(J, rng)
            for vector in [alpha, *betas]:
                assert vector.shape == (J,)
                assert vector.sum() == pytest.approx(1.0, abs=1e-12)
                assert (vector >= 0).all()

    def test_flat_dirichlet_mean(self, rng):
        draws = np.array([gen_proportions(3, rng)[0] for _ in range(100_000)])
        np.testing.assert_allclose(draws.mean(axis=0), [1 / 3] * 3, atol=0.01)

    def test_no_isoform(self, rng):
        with pytest.raises(ScenarioError):
            gen_proportions(0, rng)


class TestMakeScenario:
    alpha = np.array([1.0, 0.0])
    # squared distances to alpha grow with x
    betas = [np.array([1 - x, x]) for x in (0.1, 0.9, 0.5, 0.2, 0.3)]

    def taus(self, scenario: int) -> list[np.ndarray]:
        return make_scenario(ScenarioSpec(scenario_id=scenario), self.alpha, self.betas)

    def test_all_informative(self):
        taus = self.taus(1)
        assert len(taus) == 10
        assert all(np.array_equal(tau, self.alpha) for tau in taus)

    def test_half_informative(self):
        taus = self.taus(2)
        assert all(np.array_equal(tau, self.alpha) for tau in taus[:5])
        for tau, beta in zip(taus[5:], self.betas):
            np.testing.assert_array_equal(tau, beta)

    def test_individual_outliers(self):
        taus = self.taus(3)
        assert all(np.array_equal(tau, self.alpha) for tau in taus[:7])
        for tau, beta in zip(taus[7:], self.betas[:3]):
            np.testing.assert_array_equal(tau, beta)

    def test_distant_outliers(self):
        taus = self.taus(4)
        assert all(np.array_equal(tau, self.alpha) for tau in taus[:7])
        assert all(np.array_equal(tau, self.betas[1]) for tau in taus[7:])

    def test_close_outliers(self):
        taus = self.taus(5)
        assert all(np.array_equal(tau, self.betas[0]) for tau in taus[7:])

    @pytest.mark.parametrize("scenario, informative", [(1, 10), (2, 5), (3, 7), (4, 7), (5, 7)])
    def test_true_E(self, scenario, informative):
        spec = ScenarioSpec(scenario_id=scenario)
        assert spec.true_E == [1] * informative + [0] * (10 - informative)
        assert Scenario(scenario).informative_count == informative

    def test_not_enough_betas(self):
        with pytest.raises(ScenarioError):
            make_scenario(ScenarioSpec(scenario_id=2), self.alpha, self.betas[:3])

    def test_invalid_scenario(self):
        with pytest.raises(ValueError):
            ScenarioSpec(scenario_id=6)


class TestSimulateReads:
    def test_single_isoform_round_trip(self, single_gene, rng):
        sim = simulate_reads(single_gene, [1.0], SimConfig(n_reads=200, frag_mean=250, read_len=50), rng)
        for read, length in zip(sim.reads, sim.fragment_lengths):
            assert compatible_isoforms(read, single_gene) == {0}
            assert fragment_length(read, 0, single_gene) == length

    def test_degenerate_proportions(self, table_gene, rng):
        sim = simulate_reads(table_gene, [1.0, 0.0], SimConfig(n_reads=100, frag_mean=150, read_len=50), rng)
        assert (sim.origins == 0).all()

    def test_origin_counts(self, table_gene, rng):
        sim = simulate_reads(table_gene, [0.6, 0.4], SimConfig(n_reads=500, frag_mean=150, read_len=50), rng)
        assert abs((sim.origins == 0).sum() / 500 - 0.6) < 0.06

    def test_fragment_length_distribution(self, rng):
        gene = derive_subexons([[(1, 2000)]])
        sim = simulate_reads(gene, [1.0], SimConfig(n_reads=10_000, frag_mean=250, frag_sd=10, read_len=50), rng)
        # undo the rounding before comparing with the continuous normal
        jittered = sim.fragment_lengths + np.random.default_rng(1).uniform(-0.5, 0.5, size=10_000)
        statistic = stats.kstest(jittered, stats.norm(loc=250, scale=10).cdf).statistic
        assert statistic < 1.63 / np.sqrt(10_000)

    def test_clamping(self, splice_gene, rng):
        cfg = SimConfig(n_reads=300, frag_mean=400, frag_sd=10, read_len=50)
        sim = simulate_reads(splice_gene, [0.2, 0.4, 0.4], cfg, rng)
        lengths = np.asarray(isoform_lengths(splice_gene))
        assert (sim.fragment_lengths <= lengths[sim.origins]).all()
        assert (sim.fragment_lengths >= 100).all()
        assert not sim.full_transcript.any()

    def test_short_isoforms(self, rng):
        gene = derive_subexons([[(1, 60), (101, 190)]])
        sim = simulate_reads(gene, [1.0], SimConfig(n_reads=20, read_len=100), rng)
        assert sim.full_transcript.all()
        assert (sim.fragment_lengths == 150).all()
        read = sim.reads[0]
        assert read.half_length == 75
        assert read.positions == (1, 115, 116, 190)
        assert compatible_isoforms(read, gene) == {0}

    def test_strict_mode(self, rng):
        gene = derive_subexons([[(1, 60), (101, 190)]])
        with pytest.raises(SimulationError):
            simulate_reads(gene, [1.0], SimConfig(n_reads=5, read_len=100, strict=True), rng)

    def test_bad_proportions(self, table_gene, rng):
        with pytest.raises(SimulationError):
            simulate_reads(table_gene, [1.0], SimConfig(n_reads=5), rng)

    def test_determinism(self, table_gene):
        cfg = SimConfig(n_reads=50, frag_mean=150, read_len=50)
        first = simulate_reads(table_gene, [0.3, 0.7], cfg, np.random.default_rng(8))
        second = simulate_reads(table_gene, [0.3, 0.7], cfg, np.random.default_rng(8))
        assert first.reads == second.reads
        np.testing.assert_array_equal(first.origins, second.origins)

    @pytest.mark.parametrize("frag_mean, read_len", [(150, 50), (250, 50), (150, 100), (250, 100)])
    def test_round_trip_random_genes(self, frag_mean, read_len):
        cfg = SimConfig(n_reads=100, frag_mean=frag_mean, read_len=read_len)
        for gene in random_corpus(5, seed=frag_mean + read_len):
            rng = np.random.default_rng(len(gene.gene_id))
            index = GeneIndex(gene)
            tau = rng.dirichlet(np.ones(gene.n_isoforms))
            sim = simulate_reads(index, tau, cfg, rng)
            for read, origin, length in zip(sim.reads, sim.origins, sim.fragment_lengths):
                assert index.is_compatible(read, int(origin))
                assert index.fragment_length(read, int(origin)) == length


class TestSimulateGene:
    def test_truth(self, table_gene, rng):
        spec = ScenarioSpec(scenario_id=3)
        truth, samples = simulate_gene(table_gene, spec, SimConfig(n_reads=40, frag_mean=150, read_len=50), rng)
        assert truth.true_E == [1] * 7 + [0] * 3
        assert len(samples) == 10
        assert all(tau == truth.alpha for tau in truth.per_sample_tau[:7])
        assert truth.true_origins == [sample.origins.tolist() for sample in samples]

    def test_fixed_alpha(self, table_gene, rng):
        spec = ScenarioSpec(scenario_id=1, D=3)
        truth, _ = simulate_gene(table_gene, spec, SimConfig(n_reads=10, frag_mean=150), rng, fixed_alpha=[0.25, 0.75])
        assert truth.alpha == [0.25, 0.75]
        assert truth.true_E == [1, 1, 1]

    def test_fixed_alpha_dimension(self, table_gene, rng):
        with pytest.raises(ScenarioError):
            simulate_gene(table_gene, ScenarioSpec(scenario_id=1), SimConfig(), rng, fixed_alpha=[1.0])


class TestRandomGenes:
    def test_structure(self, rng):
        for k in range(20):
            gene = random_gene(f"g{k}", rng)
            assert 2 <= gene.n_isoforms <= 6
            first, last = gene.subexons[0], gene.subexons[-1]
            signatures = set()
            for j in range(gene.n_isoforms):
                intervals = gene.isoform_intervals(j)
                assert intervals[0] == first
                assert intervals[-1] == last
                signatures.add(gene.isoforms[j].subexon_indices)
            assert len(signatures) == gene.n_isoforms

    def test_corpus(self):
        corpus = random_corpus(3, seed=4)
        assert [gene.gene_id for gene in corpus] == ["gene0001", "gene0002", "gene0003"]
        assert random_corpus(3, seed=4) == corpus
        assert random_corpus(3, seed=5) != corpus
