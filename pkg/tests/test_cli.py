import json
from pathlib import Path

import pytest
from rich.console import Console
from typer.testing import CliRunner

from msiq.models import GeneAnnotation
from msiq.quant_sdk.io import load_reads, load_report, load_result, load_truth, read_provenance, write_annotation
from msiq.tools.quant.__main__ import app, run
from msiq.tools.quant.sweep import print_summary

CHAIN = ["--iterations", "100", "--burnin", "20"]


def simulate(out: Path, *extra: str) -> int:
    return run(
        ["simulate", "--out", str(out), "--n-genes", "2", "--n-reads", "30", "--frag-mean", "150", "--read-len", "50"]
        + list(extra)
    )


def estimate(data: Path, out: Path, *extra: str) -> int:
    return run(
        [
            "estimate",
            "--annotation",
            str(data / "annotation.json"),
            "--reads-dir",
            str(data / "reads"),
            "--out",
            str(out),
            "--frag-mean",
            "150",
        ]
        + CHAIN
        + list(extra)
    )


def error_of(capsys) -> dict:
    lines = [line for line in capsys.readouterr().err.splitlines() if line.startswith("{")]
    return json.loads(lines[-1])


def snapshot(root: Path) -> dict[str, bytes]:
    return {str(path.relative_to(root)): path.read_bytes() for path in sorted(root.rglob("*")) if path.is_file()}


@pytest.fixture(scope="module")
def dataset(tmp_path_factory) -> Path:
    data = tmp_path_factory.mktemp("data")
    assert simulate(data, "--seed", "5") == 0
    return data


def test_help():
    result = CliRunner().invoke(app, ["--help"])
    assert result.exit_code == 0
    for command in ("simulate", "estimate", "fraglen", "sweep"):
        assert command in result.output


class TestSimulate:
    def test_layout(self, dataset):
        annotation = json.loads((dataset / "annotation.json").read_text())
        assert [gene["gene_id"] for gene in annotation["genes"]] == ["gene0001", "gene0002"]
        assert annotation["provenance"]["command"] == "simulate"
        samples = sorted(path.name for path in (dataset / "reads").iterdir())
        assert samples == [f"sample_{d:02d}" for d in range(1, 11)]
        for gene_id in ("gene0001", "gene0002"):
            assert (dataset / "genes" / f"{gene_id}.json").is_file()
            truth = load_truth(dataset / "truth" / f"{gene_id}.json")
            assert truth.true_E == [1] * 10
            reads = load_reads(dataset / "reads" / "sample_01" / f"{gene_id}.tsv")
            assert len(reads) == 30
            assert len(truth.true_origins[0]) == 30

    def test_provenance(self, dataset):
        provenance = read_provenance(dataset / "reads" / "sample_04" / "gene0002.tsv")
        assert provenance.command == "simulate"
        assert provenance.config["seed"] == 5
        assert provenance.config["read_len"] == 50

    def test_rerun_is_identical(self, dataset, tmp_path):
        out = tmp_path / "sim"
        assert simulate(out, "--seed", "5") == 0
        first = snapshot(out)
        assert simulate(out, "--seed", "5") == 0
        assert snapshot(out) == first
        # same reads as the module dataset; only the output path differs in the headers
        assert load_reads(out / "reads" / "sample_07" / "gene0001.tsv") == load_reads(
            dataset / "reads" / "sample_07" / "gene0001.tsv"
        )

    def test_scenario(self, tmp_path):
        assert simulate(tmp_path, "--scenario", "4") == 0
        truth = load_truth(tmp_path / "truth" / "gene0001.json")
        assert truth.true_E == [1] * 7 + [0] * 3
        assert truth.per_sample_tau[7] == truth.per_sample_tau[9]

    def test_unknown_scenario(self, tmp_path, capsys):
        assert simulate(tmp_path, "--scenario", "6") == 2
        assert error_of(capsys)["error"] == "usage_error"


class TestEstimate:
    def test_msiq(self, dataset, tmp_path):
        assert estimate(dataset, tmp_path) == 0
        result = load_result(tmp_path / "gene0001.json")
        assert sum(result.alpha_hat) == pytest.approx(1.0)
        assert len(result.theta_hat) == 10
        assert result.estimators == []
        assert result.iterations == 100
        assert json.loads((tmp_path / "skipped.json").read_text())["skipped"] == []

    def test_all_methods_with_truth(self, dataset, tmp_path):
        assert estimate(dataset, tmp_path, "-m", "all", "--truth-dir", str(dataset / "truth")) == 0
        result = load_result(tmp_path / "gene0002.json")
        reports = {report.kind.value: report for report in result.estimators}
        assert set(reports) == {"avg", "avg-oracle", "pool", "pool-oracle", "msiqa", "msiqp"}
        # every sample is informative in the default scenario
        assert reports["avg-oracle"].alpha_hat == reports["avg"].alpha_hat
        assert reports["pool-oracle"].alpha_hat == reports["pool"].alpha_hat
        assert result.alpha_hat is not None

    def test_all_methods_without_truth(self, dataset, tmp_path):
        assert estimate(dataset, tmp_path, "-m", "all") == 0
        kinds = [report.kind.value for report in load_result(tmp_path / "gene0001.json").estimators]
        assert kinds == ["avg", "pool", "msiqa", "msiqp"]

    def test_em_only(self, dataset, tmp_path):
        assert estimate(dataset, tmp_path, "-m", "avg", "-m", "pool") == 0
        result = load_result(tmp_path / "gene0001.json")
        assert result.alpha_hat is None
        assert [report.kind.value for report in result.estimators] == ["avg", "pool"]

    def test_oracle_needs_truth(self, dataset, tmp_path, capsys):
        assert estimate(dataset, tmp_path, "-m", "avg-oracle") == 1
        assert error_of(capsys)["error"] == "estimator_input_error"

    def test_rerun_is_identical(self, dataset, tmp_path):
        assert estimate(dataset, tmp_path, "-m", "msiq", "-m", "avg") == 0
        first = snapshot(tmp_path)
        assert estimate(dataset, tmp_path, "-m", "msiq", "-m", "avg", "--workers", "2") == 0
        assert snapshot(tmp_path) == first

    def test_seed(self, dataset, tmp_path):
        assert estimate(dataset, tmp_path / "a", "--seed", "1") == 0
        assert estimate(dataset, tmp_path / "b", "--seed", "2") == 0
        first, second = load_result(tmp_path / "a" / "gene0001.json"), load_result(tmp_path / "b" / "gene0001.json")
        assert first.seed != second.seed
        assert first.alpha_hat != second.alpha_hat

    def test_gene_without_reads_is_skipped(self, tmp_path):
        data = tmp_path / "data"
        assert simulate(data, "--seed", "9") == 0
        (data / "reads" / "sample_03" / "gene0002.tsv").unlink()
        assert estimate(data, tmp_path / "out") == 0
        assert (tmp_path / "out" / "gene0001.json").is_file()
        assert not (tmp_path / "out" / "gene0002.json").exists()
        skipped = json.loads((tmp_path / "out" / "skipped.json").read_text())["skipped"]
        assert [entry["gene_id"] for entry in skipped] == ["gene0002"]
        assert skipped[0]["error"] == "no_usable_reads"

    def test_unmappable_raw_read_is_dropped(self, table_gene, tmp_path):
        data = tmp_path / "data"
        write_annotation(data / "annotation.json", [table_gene])
        for name in ("sample_01", "sample_02"):
            sample = data / "reads" / name
            sample.mkdir(parents=True)
            (sample / "table.tsv").write_text(
                "read_id\tleft\tright\n"
                "r1\t231-280\t510-559\n"
                "intronic\t305-354\t510-559\n"
                "r2\t281-300,350-379\t551-600\n"
            )
        assert estimate(data, tmp_path / "out") == 0
        result = load_result(tmp_path / "out" / "table.json")
        assert result.dropped_reads == 2
        assert len(result.theta_hat) == 2
        assert json.loads((tmp_path / "out" / "skipped.json").read_text())["skipped"] == []

    def test_bad_lambda(self, dataset, tmp_path, capsys):
        assert estimate(dataset, tmp_path, "--lambda", "1,-2") == 1
        assert error_of(capsys)["error"] == "validation_error"

    def test_missing_reads_dir(self, dataset, tmp_path, capsys):
        code = run(
            [
                "estimate",
                "--annotation",
                str(dataset / "annotation.json"),
                "--reads-dir",
                str(tmp_path / "nowhere"),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 1
        assert error_of(capsys)["error"] == "FileNotFoundError"


class TestFraglen:
    def test_single_isoform_genes(self, tmp_path):
        annotation = tmp_path / "annotation.json"
        genes = [
            GeneAnnotation.model_validate(
                {"gene_id": "single", "isoforms": [{"isoform_id": "s.1", "exons": [[1, 400], [501, 900]]}]}
            ),
            GeneAnnotation.model_validate(
                {
                    "gene_id": "double",
                    "isoforms": [
                        {"isoform_id": "d.1", "exons": [[1, 300], [401, 700]]},
                        {"isoform_id": "d.2", "exons": [[1, 300], [801, 1100]]},
                    ],
                }
            ),
        ]
        annotation.write_text(json.dumps({"genes": [gene.model_dump(mode="json") for gene in genes]}))
        data = tmp_path / "data"
        code = run(
            [
                "simulate",
                "--out",
                str(data),
                "--annotation",
                str(annotation),
                "--n-reads",
                "200",
                "--frag-mean",
                "250",
                "--frag-sd",
                "10",
                "--read-len",
                "50",
            ]
        )
        assert code == 0
        model_path = tmp_path / "fraglen.json"
        code = run(
            ["fraglen", "--annotation", str(annotation), "--reads-dir", str(data / "reads"), "--out", str(model_path)]
        )
        assert code == 0
        model = json.loads(model_path.read_text())
        assert model["mean"] == pytest.approx(250, abs=1.5)
        assert model["sd"] == pytest.approx(10, abs=1.0)
        assert model["provenance"]["command"] == "fraglen"

        out = tmp_path / "estimates"
        assert estimate(data, out, "--fraglen-model", str(model_path)) == 0
        assert (out / "single.json").is_file()
        assert (out / "double.json").is_file()

    def test_no_single_isoform_gene(self, dataset, tmp_path, capsys):
        code = run(
            [
                "fraglen",
                "--annotation",
                str(dataset / "annotation.json"),
                "--reads-dir",
                str(dataset / "reads"),
                "--out",
                str(tmp_path / "fraglen.json"),
            ]
        )
        assert code == 1
        assert error_of(capsys)["error"] == "fragment_model_error"


class TestSweep:
    ARGS = ["--n-genes", "2", "--scenarios", "1,4", "--settings", "1", "--n-reads", "30", "--em-max-iter", "200"]

    def test_report(self, tmp_path):
        assert run(["sweep", "--out", str(tmp_path)] + self.ARGS + CHAIN) == 0
        for name in ("report.tsv", "aggregates.json", "identification.tsv"):
            assert (tmp_path / name).is_file()
        report = load_report(tmp_path)
        assert report.check_aggregates()
        assert len(report.identification) == 4
        assert {row.scenario for row in report.rows} == {1, 4}
        assert report.provenance.command == "sweep"
        assert "workers" not in report.provenance.config

    def test_independent_of_workers(self, tmp_path):
        assert run(["sweep", "--out", str(tmp_path)] + self.ARGS + CHAIN) == 0
        first = snapshot(tmp_path)
        assert run(["sweep", "--out", str(tmp_path), "--workers", "2"] + self.ARGS + CHAIN) == 0
        assert snapshot(tmp_path) == first

    def test_summary_table(self, tmp_path):
        assert run(["sweep", "--out", str(tmp_path)] + self.ARGS + CHAIN) == 0
        console = Console(record=True, width=200)
        print_summary(load_report(tmp_path), console)
        text = console.export_text()
        assert "Median REE" in text
        assert "F150/R50" in text

    def test_bad_setting(self, tmp_path, capsys):
        assert run(["sweep", "--out", str(tmp_path), "--settings", "5"]) == 1
        assert error_of(capsys)["error"] == "validation_error"


class TestErrors:
    def test_unknown_option(self, tmp_path, capsys):
        assert run(["simulate", "--out", str(tmp_path), "--bogus"]) == 2
        error = error_of(capsys)
        assert error["error"] == "usage_error"
        assert "--bogus" in error["message"]

    def test_bad_annotation(self, tmp_path, capsys):
        annotation = tmp_path / "annotation.json"
        annotation.write_text(
            json.dumps({"gene_id": "bad", "isoforms": [{"isoform_id": "b.1", "exons": [[1, 100], [50, 150]]}]})
        )
        assert run(["simulate", "--out", str(tmp_path / "out"), "--annotation", str(annotation)]) == 1
        error = error_of(capsys)
        assert error["error"] == "annotation_error"
        assert "overlap" in error["message"]
