from pathlib import Path
from typing import Annotated

import typer

from msiq.quant_sdk import GeneIndex, estimate_fragment_params, gene_from_annotation
from msiq.quant_sdk.io import load_annotation, load_reads, sample_dirs, write_fragment_model
from . import logger
from .arguments import AnnotationOption, ReadsDirOption
from .settings import CliConfig


def cmd_fraglen(
    annotation: AnnotationOption,
    reads_dir: ReadsDirOption,
    out: Annotated[
        Path,
        typer.Option(
            "-o",
            "--out",
            help="Output fragment length model JSON",
            envvar="MSIQ_OUT",
        ),
    ],
):
    """Estimate the fragment length model from the reads of single-isoform genes"""
    config = CliConfig(command="fraglen", annotation=annotation, reads_dir=reads_dir, out=out)

    genes = [gene_from_annotation(gene) for gene in load_annotation(config.annotation)]
    single = [gene for gene in genes if gene.n_isoforms == 1]
    logger.info(f"{len(single)}/{len(genes)} single-isoform genes")

    pairs = []
    for sample in sample_dirs(config.reads_dir):
        for gene in single:
            path = sample / f"{gene.gene_id}.tsv"
            if path.is_file():
                pairs.extend((read, gene) for read in load_reads(path, GeneIndex(gene)))

    flm = estimate_fragment_params(pairs)
    logger.info(f"Fragment length: mean={flm.mean:.2f} sd={flm.sd:.2f} from {len(pairs)} reads")
    write_fragment_model(config.out, flm, config.provenance())
