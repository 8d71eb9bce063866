import numpy as np
import pytest

from msiq.models import IdentificationRow, ReeReport, Scenario, SweepConfig
from msiq.quant_sdk import aggregate, identification_rate, median_ree, random_corpus, ree, sweep, zero_coordinates
from msiq.quant_sdk.evaluation import ESTIMATORS
from tests.util import make_row


class TestRee:
    def test_identity(self):
        assert ree([0.2, 0.3, 0.5], [0.2, 0.3, 0.5]) == 0

    def test_two_isoforms(self):
        assert ree([0.5, 0.5], [0.6, 0.4]) == pytest.approx(0.4)

    def test_three_isoforms(self):
        assert ree([0.25, 0.25, 0.5], [0.5, 0.25, 0.25]) == pytest.approx(1.5)

    def test_permutation(self, rng):
        for _ in range(20):
            alpha, alpha_hat = rng.dirichlet(np.ones(5)), rng.dirichlet(np.ones(5))
            perm = rng.permutation(5)
            assert ree(alpha[perm], alpha_hat[perm]) == pytest.approx(ree(alpha, alpha_hat), rel=1e-12)

    def test_zero_coordinates(self):
        assert ree([0.5, 0.5, 0.0], [0.5, 0.5, 0.0]) == 0
        assert ree([0.5, 0.5, 0.0], [0.5, 0.4, 0.1]) == pytest.approx(0.2)
        assert zero_coordinates([0.5, 0.5, 0.0], [0.5, 0.4, 0.1]) == 1
        assert zero_coordinates([0.5, 0.5, 0.0], [0.5, 0.5, 0.0]) == 0

    def test_zero_penalty(self):
        assert ree([0.5, 0.5, 0.0], [0.5, 0.4, 0.1], zero_penalty=1.0) == pytest.approx(1.2)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            ree([0.5, 0.5], [1.0])
        with pytest.raises(ValueError):
            zero_coordinates([1.0], [0.5, 0.5])


class TestSummaries:
    def test_aggregate(self):
        rows = [make_row("msiq", value, gene=f"g{k}") for k, value in enumerate([4.0, 1.0, 3.0, 2.0])]
        rows.append(make_row("avg", 7.0))
        aggregates = aggregate(rows)
        assert [(row.estimator, row.n) for row in aggregates] == [("avg", 1), ("msiq", 4)]
        msiq = aggregates[1]
        assert (msiq.median, msiq.q1, msiq.q3, msiq.mean) == pytest.approx((2.5, 1.75, 3.25, 2.5))

    def test_aggregate_empty(self):
        assert aggregate([]) == []

    def test_median_ree(self):
        rows = [make_row("msiq", 1.0), make_row("msiq", 3.0), make_row("pool", 5.0, setting=2)]
        report = ReeReport(rows=rows, aggregates=aggregate(rows))
        assert median_ree(report, 2, 1, "msiq") == 2.0
        assert median_ree(report, 2, 2, "pool") == 5.0
        with pytest.raises(KeyError):
            median_ree(report, 3, 1, "msiq")

    def test_check_aggregates(self):
        rows = [make_row("msiq", 1.0), make_row("msiq", 3.0)]
        report = ReeReport(rows=rows, aggregates=aggregate(rows))
        assert report.check_aggregates()
        report.rows.append(make_row("msiq", 8.0))
        assert not report.check_aggregates()

    def test_identification_rate(self):
        report = ReeReport(
            identification=[
                IdentificationRow(
                    gene_id="a", scenario=4, setting=1, replicate=0, true_E=[1, 1, 0], theta_hat=[0.9, 0.7, 0.1]
                ),
                IdentificationRow(
                    gene_id="b", scenario=4, setting=1, replicate=0, true_E=[1, 1, 0], theta_hat=[0.9, 0.5, 0.1]
                ),
                IdentificationRow(
                    gene_id="a", scenario=4, setting=2, replicate=0, true_E=[1, 1, 0], theta_hat=[0.6, 0.6, 0.4]
                ),
            ]
        )
        assert identification_rate(report, 4, 1) == 0.5
        assert identification_rate(report, 4) == pytest.approx(2 / 3)
        assert identification_rate(report, 4, 1, threshold=0.4) == 1.0
        with pytest.raises(KeyError):
            identification_rate(report, 2)


SMALL = dict(scenarios=[1, 4], settings=[1], n_reads=40, iterations=60, burn_in=20, em_max_iter=200)


@pytest.fixture(scope="module")
def small_report() -> ReeReport:
    return sweep(random_corpus(3, seed=11), SweepConfig(**SMALL))


class TestSweep:
    def test_rows(self, small_report):
        assert len(small_report.rows) == 3 * 2 * len(ESTIMATORS)
        assert not small_report.failures
        assert all(row.ree >= 0 for row in small_report.rows)
        assert {row.estimator for row in small_report.rows} == set(ESTIMATORS)

    def test_aggregates(self, small_report):
        assert small_report.check_aggregates()
        assert {(row.scenario, row.setting) for row in small_report.aggregates} == {(1, 1), (4, 1)}
        assert all(row.n == 3 for row in small_report.aggregates)

    def test_oracles_match_in_all_informative_scenario(self, small_report):
        values = {(row.gene_id, row.estimator): row.ree for row in small_report.rows if row.scenario == 1}
        for gene_id in {gene for gene, _ in values}:
            assert values[gene_id, "avg-oracle"] == values[gene_id, "avg"]
            assert values[gene_id, "pool-oracle"] == values[gene_id, "pool"]

    def test_identification(self, small_report):
        rows = small_report.identification
        assert len(rows) == 6
        for row in rows:
            informative = Scenario(row.scenario).informative_count
            assert row.true_E == [1] * informative + [0] * (10 - informative)
            assert all(0 <= theta <= 1 for theta in row.theta_hat)

    def test_deterministic(self, small_report):
        again = sweep(random_corpus(3, seed=11), SweepConfig(**SMALL))
        assert again.rows == small_report.rows
        assert again.identification == small_report.identification

    def test_independent_of_workers(self, small_report):
        parallel = sweep(random_corpus(3, seed=11), SweepConfig(**SMALL, workers=2))
        assert parallel.rows == small_report.rows

    def test_seed_changes_rows(self, small_report):
        other = sweep(random_corpus(3, seed=11), SweepConfig(**SMALL, seed=1))
        assert other.rows != small_report.rows

    def test_failures_are_recorded(self):
        genes = random_corpus(2, seed=11)
        report = sweep(genes, SweepConfig(**SMALL, fixed_alpha=[1.0]))
        assert report.rows == []
        assert report.aggregates == []
        assert len(report.failures) == 4
        assert {failure.error for failure in report.failures} == {"scenario_error"}

    def test_prior_length_failures_are_recorded(self):
        genes = random_corpus(2, seed=11)
        lam = [1.0] * 40
        report = sweep(genes, SweepConfig(**SMALL, lam=lam))
        assert report.rows == []
        assert len(report.failures) == 4
        assert {failure.error for failure in report.failures} == {"chain_state_error"}
        assert all("lambda has 40 entries" in failure.message for failure in report.failures)

    def test_empty_corpus(self):
        with pytest.raises(ValueError):
            sweep([], SweepConfig(**SMALL))
