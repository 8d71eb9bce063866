from typing import Annotated

import typer
from rich.box import ROUNDED
from rich.console import Console
from rich.table import Table

from msiq.models import FragmentSetting, ReeReport, SweepConfig
from msiq.quant_sdk import gene_from_annotation, identification_rate, random_corpus, sweep
from msiq.quant_sdk.evaluation import ESTIMATORS
from msiq.quant_sdk.io import load_annotation, write_report
from . import logger
from .arguments import (
    AOption,
    BOption,
    BurnInOption,
    EmMaxIterOption,
    EmTolOption,
    FragSdOption,
    IterationsOption,
    LambdaOption,
    NGenesOption,
    NReadsOption,
    OptionalAnnotationOption,
    OutOption,
    SeedOption,
    ThresholdOption,
    WorkersOption,
)
from .settings import CliConfig


def print_summary(report: ReeReport, console: Console | None = None):
    """Median REE of every estimator per (scenario, setting), with the identification rate."""
    console = console or Console(stderr=True)
    table = Table(title="Median REE", box=ROUNDED)
    table.add_column("Scenario", justify="right")
    table.add_column("Setting", justify="right")
    for estimator in ESTIMATORS:
        table.add_column(estimator, justify="right")
    table.add_column("Identified", justify="right")

    medians = {(row.scenario, row.setting, row.estimator): row.median for row in report.aggregates}
    for scenario, setting in sorted({(row.scenario, row.setting) for row in report.aggregates}):
        cells = [
            f"{medians[scenario, setting, e]:.3f}" if (scenario, setting, e) in medians else "-" for e in ESTIMATORS
        ]
        rate = identification_rate(report, scenario, setting)
        label = FragmentSetting.from_index(setting).label
        table.add_row(str(scenario), label, *cells, f"{rate:.0%}")
    console.print(table)


def cmd_sweep(
    out: OutOption,
    annotation: OptionalAnnotationOption = None,
    n_genes: NGenesOption = 50,
    scenarios: Annotated[
        str,
        typer.Option(
            "--scenarios",
            help="Comma-separated heterogeneity scenarios (1-5)",
            envvar="MSIQ_SCENARIOS",
        ),
    ] = "1,2,3,4,5",
    settings: Annotated[
        str,
        typer.Option(
            "--settings",
            help="Comma-separated fragment/read length settings: 1=150/50, 2=250/50, 3=150/100, 4=250/100",
            envvar="MSIQ_SETTINGS",
        ),
    ] = "1,2,3,4",
    replicates: Annotated[
        int,
        typer.Option(
            "--replicates",
            help="Simulated replicates per gene, scenario and setting",
            envvar="MSIQ_REPLICATES",
        ),
    ] = 1,
    n_reads: NReadsOption = 500,
    frag_sd: FragSdOption = 10,
    iterations: IterationsOption = 2000,
    burnin: BurnInOption = 500,
    seed: SeedOption = 0,
    lam: LambdaOption = "1",
    a: AOption = 1.0,
    b: BOption = 1.0,
    threshold: ThresholdOption = 0.5,
    em_tol: EmTolOption = 1e-8,
    em_max_iter: EmMaxIterOption = 1000,
    workers: WorkersOption = 1,
):
    """Benchmark MSIQ against the EM-based estimators on simulated genes"""
    config = CliConfig(
        command="sweep",
        out=out,
        annotation=annotation,
        n_genes=n_genes,
        scenarios=scenarios,
        settings=settings,
        replicates=replicates,
        n_reads=n_reads,
        frag_sd=frag_sd,
        iterations=iterations,
        burn_in=burnin,
        seed=seed,
        lam=lam,
        a=a,
        b=b,
        threshold=threshold,
        em_tol=em_tol,
        em_max_iter=em_max_iter,
        workers=workers,
    )

    if config.annotation is not None:
        genes = [gene_from_annotation(gene) for gene in load_annotation(config.annotation)]
    else:
        genes = random_corpus(config.n_genes, config.seed)

    sweep_config = SweepConfig(
        scenarios=config.scenarios,
        settings=config.settings,
        replicates=config.replicates,
        seed=config.seed,
        n_reads=config.n_reads,
        frag_sd=config.frag_sd,
        lam=config.lam,
        a=config.a,
        b=config.b,
        iterations=config.iterations,
        burn_in=config.burn_in,
        em_tol=config.em_tol,
        em_max_iter=config.em_max_iter,
        threshold=config.threshold,
        workers=config.workers,
    )
    report = sweep(genes, sweep_config)
    report.provenance = config.provenance()
    write_report(config.out, report)
    logger.info(f"Sweep report written to {config.out}")
    if report.aggregates:
        print_summary(report)
