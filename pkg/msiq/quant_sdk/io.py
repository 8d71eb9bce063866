"""
Reading and writing of the files exchanged by the `msiq-quant` commands.

JSON files embed a `provenance` object; TSV files start with a `# provenance: {...}` line.
Neither holds a timestamp, so identical inputs and settings give identical bytes.

Directory layout of a simulated dataset:

    annotation.json                   genes in exon form
    genes/<gene_id>.json              genes in derived (subexon) form
    reads/sample_<dd>/<gene_id>.tsv   summarized reads of each sample
    truth/<gene_id>.json              hidden truth of each gene
"""

import json
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import pandas as pd
from pydantic import BaseModel

from msiq.models import (
    FragmentLengthModel,
    GeneAnnotation,
    GeneModel,
    GeneResult,
    IdentificationRow,
    Provenance,
    ReeReport,
    ReeRow,
    SimulationTruth,
    SummarizedRead,
    UnmappablePositionError,
)
from .gene_model import annotation_from_gene
from .read_model import GeneIndex, positions_from_intervals, summarize_read

logger = logging.getLogger(__name__)

PROVENANCE_PREFIX = "# provenance: "
SUMMARIZED_COLUMNS = [
    "read_id",
    "s1",
    "s2",
    "y_first",
    "y_left_last",
    "y_right_first",
    "y_last",
    "half_length",
    "right_half_length",
]
RAW_COLUMNS = ["read_id", "left", "right"]


def _dump(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def write_json(path: Path, data: BaseModel | dict[str, Any], provenance: Provenance | None = None):
    """Write a model or a dict as indented JSON, with a provenance object when given."""
    payload = data.model_dump(mode="json") if isinstance(data, BaseModel) else dict(data)
    if provenance is not None:
        payload["provenance"] = provenance.model_dump(mode="json")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_dump(payload))


def _write_tsv(path: Path, frame: pd.DataFrame, provenance: Provenance | None):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        if provenance is not None:
            handle.write(PROVENANCE_PREFIX + provenance.model_dump_json() + "\n")
        frame.to_csv(handle, sep="\t", index=False, lineterminator="\n")


def _read_tsv(path: Path, **kwargs) -> pd.DataFrame:
    with path.open() as handle:
        position = handle.tell()
        if not handle.readline().startswith("#"):
            handle.seek(position)
        return pd.read_csv(handle, sep="\t", **kwargs)


def read_provenance(path: Path) -> Provenance | None:
    """Provenance header of a JSON or TSV output file."""
    if path.suffix == ".tsv":
        with path.open() as handle:
            line = handle.readline()
        if line.startswith(PROVENANCE_PREFIX):
            return Provenance.model_validate_json(line[len(PROVENANCE_PREFIX) :])
        return None
    data = json.loads(path.read_text())
    if isinstance(data, dict) and "provenance" in data:
        return Provenance.model_validate(data["provenance"])
    return None


# Genes


def write_annotation(path: Path, genes: Sequence[GeneModel], provenance: Provenance | None = None):
    """Write genes in exon form."""
    write_json(
        path,
        {"genes": [annotation_from_gene(gene).model_dump(mode="json") for gene in genes]},
        provenance,
    )


def load_annotation(path: Path) -> list[GeneAnnotation]:
    """
    Load genes in exon form.

    Accepts a single gene object, a list of genes, or an object with a `genes` list.
    """
    data = json.loads(path.read_text())
    if isinstance(data, dict):
        data = data.get("genes", [data])
    return [GeneAnnotation.model_validate(gene) for gene in data]


def write_gene(path: Path, gene: GeneModel, provenance: Provenance | None = None):
    write_json(path, gene, provenance)


def load_gene(path: Path) -> GeneModel:
    return GeneModel.model_validate_json(path.read_text())


# Reads


def _indices(text: str) -> tuple[int, ...]:
    return tuple(int(k) for k in str(text).split(","))


def _optional_int(value: Any) -> int | None:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    return int(value)


def write_reads(path: Path, reads: Sequence[SummarizedRead], provenance: Provenance | None = None):
    """Write summarized reads, one row per read."""
    frame = pd.DataFrame(
        [
            {
                "read_id": read.read_id,
                "s1": ",".join(str(k) for k in read.s1),
                "s2": ",".join(str(k) for k in read.s2),
                "y_first": read.y_first,
                "y_left_last": read.y_left_last,
                "y_right_first": read.y_right_first,
                "y_last": read.y_last,
                "half_length": read.half_length,
                "right_half_length": read.right_half_length,
            }
            for read in reads
        ],
        columns=SUMMARIZED_COLUMNS,
    ).astype({"half_length": "Int64", "right_half_length": "Int64"})
    _write_tsv(path, frame, provenance)


@dataclass(frozen=True)
class SampleReads:
    """
    Reads of one sample for one gene.

    Attributes:
        reads: loaded reads, in file order
        rejected_read_ids: raw reads with a position outside every subexon
    """

    reads: list[SummarizedRead]
    rejected_read_ids: tuple[str, ...] = ()


def _summarize_raw(path: Path, frame: pd.DataFrame, index: GeneIndex) -> SampleReads:
    reads: list[SummarizedRead] = []
    rejected: list[str] = []
    for row in frame.itertuples(index=False):
        left, right = positions_from_intervals(row.left), positions_from_intervals(row.right)
        try:
            reads.append(summarize_read(left, right, index, read_id=row.read_id))
        except UnmappablePositionError as exc:
            logger.debug(f"{path}: read {row.read_id} rejected: {exc}")
            rejected.append(row.read_id)
    if rejected:
        logger.info(f"{path}: rejected {len(rejected)}/{len(frame)} unmappable reads")
    return SampleReads(reads=reads, rejected_read_ids=tuple(rejected))


def load_sample_reads(path: Path, gene: GeneModel | GeneIndex | None = None) -> SampleReads:
    """
    Load reads from a summarized or a raw read TSV.

    Raw files (`read_id`, `left`, `right` as covered intervals `a-b,c-d`) are summarized
    against `gene`, which is then required. A raw read with a position in no subexon
    is rejected and reported, the other reads are kept.
    """
    frame = _read_tsv(path, dtype={"read_id": str, "s1": str, "s2": str, "left": str, "right": str})
    columns = set(frame.columns)
    if set(RAW_COLUMNS) <= columns and "s1" not in columns:
        if gene is None:
            raise ValueError(f"{path}: raw reads need a gene to be summarized against")
        return _summarize_raw(path, frame, gene if isinstance(gene, GeneIndex) else GeneIndex(gene))

    missing = set(SUMMARIZED_COLUMNS[:7]) - columns
    if missing:
        raise ValueError(f"{path}: missing columns {sorted(missing)}")
    records = frame.to_dict(orient="records")
    reads = [
        SummarizedRead(
            read_id=record["read_id"],
            s1=_indices(record["s1"]),
            s2=_indices(record["s2"]),
            y_first=int(record["y_first"]),
            y_left_last=int(record["y_left_last"]),
            y_right_first=int(record["y_right_first"]),
            y_last=int(record["y_last"]),
            half_length=_optional_int(record.get("half_length")),
            right_half_length=_optional_int(record.get("right_half_length")),
        )
        for record in records
    ]
    return SampleReads(reads=reads)


def load_reads(path: Path, gene: GeneModel | GeneIndex | None = None) -> list[SummarizedRead]:
    """Load the reads of a summarized or raw read TSV, without the rejected raw reads."""
    return load_sample_reads(path, gene).reads


def sample_dirs(reads_dir: Path) -> list[Path]:
    """Sample directories of a read directory, in sample order."""
    return sorted(path for path in reads_dir.iterdir() if path.is_dir() and path.name.startswith("sample_"))


def sample_dir_name(d: int) -> str:
    return f"sample_{d + 1:02d}"


# Truth, results and reports


def write_truth(path: Path, truth: SimulationTruth):
    write_json(path, truth)


def load_truth(path: Path) -> SimulationTruth:
    return SimulationTruth.model_validate_json(path.read_text())


def write_result(path: Path, result: GeneResult):
    write_json(path, result)


def load_result(path: Path) -> GeneResult:
    return GeneResult.model_validate_json(path.read_text())


def write_fragment_model(path: Path, flm: FragmentLengthModel, provenance: Provenance | None = None):
    write_json(path, flm, provenance)


def load_fragment_model(path: Path) -> FragmentLengthModel:
    return FragmentLengthModel.model_validate_json(path.read_text())


def write_report(out_dir: Path, report: ReeReport):
    """
    Write a sweep report: `report.tsv` (one row per estimate), `aggregates.json`
    and `identification.tsv` (one row per simulated gene).
    """
    rows = pd.DataFrame([row.model_dump() for row in report.rows], columns=list(ReeRow.model_fields))
    _write_tsv(out_dir / "report.tsv", rows, report.provenance)

    identification = pd.DataFrame(
        [
            {
                **row.model_dump(exclude={"true_E", "theta_hat"}),
                "true_E": ",".join(str(e) for e in row.true_E),
                "theta_hat": ",".join(repr(theta) for theta in row.theta_hat),
            }
            for row in report.identification
        ],
        columns=list(IdentificationRow.model_fields),
    )
    _write_tsv(out_dir / "identification.tsv", identification, report.provenance)

    write_json(
        out_dir / "aggregates.json",
        {
            "aggregates": [row.model_dump() for row in report.aggregates],
            "failures": [failure.model_dump() for failure in report.failures],
        },
        report.provenance,
    )


def load_report(out_dir: Path) -> ReeReport:
    """Read back a report written by `write_report`."""
    rows = _read_tsv(out_dir / "report.tsv", dtype={"gene_id": str, "estimator": str})
    identification = _read_tsv(out_dir / "identification.tsv", dtype={"gene_id": str, "true_E": str, "theta_hat": str})
    aggregates = json.loads((out_dir / "aggregates.json").read_text())
    return ReeReport(
        rows=[ReeRow.model_validate(record) for record in rows.to_dict(orient="records")],
        identification=[
            IdentificationRow(
                gene_id=record["gene_id"],
                scenario=int(record["scenario"]),
                setting=int(record["setting"]),
                replicate=int(record["replicate"]),
                true_E=[int(e) for e in record["true_E"].split(",")],
                theta_hat=[float(t) for t in record["theta_hat"].split(",")],
            )
            for record in identification.to_dict(orient="records")
        ],
        aggregates=aggregates["aggregates"],
        failures=aggregates["failures"],
        provenance=read_provenance(out_dir / "report.tsv"),
    )
