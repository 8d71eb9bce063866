from typing import Annotated

import numpy as np
import typer

from msiq.models import Scenario, ScenarioSpec, SimConfig
from msiq.quant_sdk import gene_from_annotation, random_corpus, simulate_gene
from msiq.quant_sdk.io import (
    load_annotation,
    sample_dir_name,
    write_annotation,
    write_gene,
    write_reads,
    write_truth,
)
from msiq.utils.seeding import gene_seed_sequence
from . import logger
from .arguments import (
    FragMeanOption,
    FragSdOption,
    NGenesOption,
    NReadsOption,
    OptionalAnnotationOption,
    OutOption,
    ReadLenOption,
    SeedOption,
)
from .settings import CliConfig


def cmd_simulate(
    out: OutOption,
    annotation: OptionalAnnotationOption = None,
    n_genes: NGenesOption = 50,
    scenario: Annotated[
        int,
        typer.Option(
            "--scenario",
            min=1,
            max=5,
            help="Heterogeneity scenario: " + "; ".join(f"{s.value}: {s.description}" for s in Scenario),
            envvar="MSIQ_SCENARIO",
        ),
    ] = 1,
    n_reads: NReadsOption = 500,
    frag_mean: FragMeanOption = 250,
    frag_sd: FragSdOption = 10,
    read_len: ReadLenOption = 100,
    seed: SeedOption = 0,
    strict: Annotated[
        bool,
        typer.Option(
            "--strict",
            help="Fail on genes whose isoforms are all shorter than two read ends",
            envvar="MSIQ_STRICT",
        ),
    ] = False,
):
    """Simulate paired-end reads of 10 samples in a heterogeneity scenario"""
    config = CliConfig(
        command="simulate",
        out=out,
        annotation=annotation,
        n_genes=n_genes,
        scenario=scenario,
        n_reads=n_reads,
        frag_mean=frag_mean,
        frag_sd=frag_sd,
        read_len=read_len,
        seed=seed,
        strict=strict,
    )
    provenance = config.provenance()

    if config.annotation is not None:
        genes = [gene_from_annotation(gene) for gene in load_annotation(config.annotation)]
    else:
        genes = random_corpus(config.n_genes, config.seed)

    spec = ScenarioSpec(scenario_id=config.scenario)
    sim_cfg = SimConfig(
        n_reads=config.n_reads,
        frag_mean=config.frag_mean,
        frag_sd=config.frag_sd,
        read_len=config.read_len,
        seed=config.seed,
        strict=config.strict,
    )

    write_annotation(config.out / "annotation.json", genes, provenance)
    for gene in genes:
        rng = np.random.default_rng(gene_seed_sequence(config.seed, gene.gene_id))
        truth, samples = simulate_gene(gene, spec, sim_cfg, rng)
        truth.provenance = provenance
        write_gene(config.out / "genes" / f"{gene.gene_id}.json", gene, provenance)
        write_truth(config.out / "truth" / f"{gene.gene_id}.json", truth)
        for d, sample in enumerate(samples):
            write_reads(config.out / "reads" / sample_dir_name(d) / f"{gene.gene_id}.tsv", sample.reads, provenance)
        logger.debug(f"{gene.gene_id}: {gene.n_isoforms} isoforms, alpha={np.round(truth.alpha, 3).tolist()}")

    logger.info(f"Simulated {len(genes)} genes in scenario {config.scenario.value} into {config.out}")
