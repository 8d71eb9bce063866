from pathlib import Path
from typing import Annotated, Any

import typer
from joblib import Parallel, delayed
from pydantic import ValidationError

from msiq.models import (
    EstimatorInputError,
    EstimatorKind,
    FragmentLengthModel,
    GeneModel,
    GeneResult,
    Hyperparameters,
    MsiqError,
    Provenance,
    SimulationTruth,
)
from msiq.quant_sdk import GeneIndex, gene_from_annotation, generating_matrix, run_chain, run_estimators
from msiq.quant_sdk.io import (
    load_annotation,
    load_fragment_model,
    load_sample_reads,
    load_truth,
    sample_dirs,
    write_json,
    write_result,
)
from msiq.utils.seeding import chain_seed
from . import logger
from .arguments import (
    AnnotationOption,
    AOption,
    BOption,
    BurnInOption,
    EmMaxIterOption,
    EmTolOption,
    FragMeanOption,
    FragSdOption,
    IterationsOption,
    LambdaOption,
    Method,
    OutOption,
    ReadsDirOption,
    SeedOption,
    ThresholdOption,
    WorkersOption,
)
from .settings import CliConfig


def resolve_methods(methods: list[Method], has_truth: bool) -> tuple[bool, list[EstimatorKind]]:
    """
    Whether MSIQ is requested, and the EM-based estimators to run.

    `all` selects every estimator; oracle estimators only when the truth is available.

    Raises:
        EstimatorInputError: if an oracle estimator is requested explicitly without truth
    """
    if Method.all in methods:
        kinds = [kind for kind in EstimatorKind if has_truth or not kind.is_oracle]
        return True, kinds
    kinds = [method.kind for method in methods if method.kind is not None]
    if not has_truth and any(kind.is_oracle for kind in kinds):
        raise EstimatorInputError("oracle estimators need --truth-dir")
    return Method.msiq in methods, list(dict.fromkeys(kinds))


def estimate_gene(
    gene: GeneModel,
    samples: list[Path],
    config: CliConfig,
    flm: FragmentLengthModel,
    run_msiq: bool,
    kinds: list[EstimatorKind],
    provenance: Provenance,
) -> GeneResult | dict[str, Any]:
    """Estimate one gene; returns a skip entry instead of raising on domain errors."""
    try:
        index = GeneIndex(gene)
        H = []
        dropped = 0
        for sample in samples:
            path = sample / f"{gene.gene_id}.tsv"
            if not path.is_file():
                return {"gene_id": gene.gene_id, "error": "no_usable_reads", "message": f"no read in {sample.name}"}
            sample_reads = load_sample_reads(path, index)
            matrix = generating_matrix(sample_reads.reads, index, flm)
            dropped += len(sample_reads.rejected_read_ids) + len(matrix.dropped_read_ids)
            H.append(matrix)

        seed = chain_seed(config.seed, gene.gene_id)
        summary = None
        if run_msiq or any(kind.needs_theta for kind in kinds):
            hyper = Hyperparameters.broadcast(config.lam, gene.n_isoforms, config.a, config.b)
            summary = run_chain(H, hyper, config.iterations, config.burn_in, seed)

        truth: SimulationTruth | None = None
        if config.truth_dir is not None and any(kind.is_oracle for kind in kinds):
            truth = load_truth(config.truth_dir / f"{gene.gene_id}.json")
        reports = run_estimators(
            kinds,
            H,
            config.em_config,
            true_E=truth.true_E if truth else None,
            theta_hat=summary.theta_hat if summary else None,
            threshold=config.threshold,
        )
    except (MsiqError, ValidationError, ValueError, OSError) as exc:
        logger.info(f"{gene.gene_id} skipped: {exc}")
        return {"gene_id": gene.gene_id, "error": getattr(exc, "code", type(exc).__name__), "message": str(exc)}

    return GeneResult(
        gene_id=gene.gene_id,
        alpha_hat=summary.alpha_hat if summary else None,
        theta_hat=summary.theta_hat if summary else None,
        iterations=config.iterations,
        burn_in=config.burn_in,
        seed=seed,
        dropped_reads=dropped,
        estimators=reports,
        provenance=provenance,
    )


def cmd_estimate(
    annotation: AnnotationOption,
    reads_dir: ReadsDirOption,
    out: OutOption,
    method: Annotated[
        list[Method],
        typer.Option(
            "-m",
            "--method",
            help="Estimators to run (repeatable)",
            envvar="MSIQ_METHOD",
        ),
    ] = [Method.msiq],
    truth_dir: Annotated[
        Path | None,
        typer.Option(
            "--truth-dir",
            help="Directory of simulation truth files, needed by the oracle estimators",
            envvar="MSIQ_TRUTH_DIR",
        ),
    ] = None,
    fraglen_model: Annotated[
        Path | None,
        typer.Option(
            "--fraglen-model",
            help="Fragment length model JSON written by 'fraglen', overrides --frag-mean and --frag-sd",
            envvar="MSIQ_FRAGLEN_MODEL",
        ),
    ] = None,
    iterations: IterationsOption = 2000,
    burnin: BurnInOption = 500,
    seed: SeedOption = 0,
    lam: LambdaOption = "1",
    a: AOption = 1.0,
    b: BOption = 1.0,
    frag_mean: FragMeanOption = 250,
    frag_sd: FragSdOption = 10,
    threshold: ThresholdOption = 0.5,
    em_tol: EmTolOption = 1e-8,
    em_max_iter: EmMaxIterOption = 1000,
    workers: WorkersOption = 1,
):
    """Estimate isoform proportions of every gene from reads of several samples"""
    config = CliConfig(
        command="estimate",
        annotation=annotation,
        reads_dir=reads_dir,
        out=out,
        methods=[m.value for m in method],
        truth_dir=truth_dir,
        fraglen_model=fraglen_model,
        iterations=iterations,
        burn_in=burnin,
        seed=seed,
        lam=lam,
        a=a,
        b=b,
        frag_mean=frag_mean,
        frag_sd=frag_sd,
        threshold=threshold,
        em_tol=em_tol,
        em_max_iter=em_max_iter,
        workers=workers,
    )
    provenance = config.provenance()
    run_msiq, kinds = resolve_methods(method, config.truth_dir is not None)

    if config.fraglen_model is not None:
        flm = load_fragment_model(config.fraglen_model)
    else:
        flm = FragmentLengthModel(mean=config.frag_mean, sd=config.frag_sd)
    genes = [gene_from_annotation(gene) for gene in load_annotation(config.annotation)]
    samples = sample_dirs(config.reads_dir)
    if not samples:
        raise ValueError(f"no sample directory in {config.reads_dir}")
    logger.info(f"Estimating {len(genes)} genes over {len(samples)} samples")

    results = Parallel(n_jobs=config.workers)(
        delayed(estimate_gene)(gene, samples, config, flm, run_msiq, kinds, provenance) for gene in genes
    )

    skipped = []
    for result in results:
        if isinstance(result, GeneResult):
            write_result(config.out / f"{result.gene_id}.json", result)
        else:
            skipped.append(result)
    write_json(config.out / "skipped.json", {"skipped": skipped}, provenance)
    logger.info(f"{len(genes) - len(skipped)} genes estimated, {len(skipped)} skipped")
