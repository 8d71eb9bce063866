"""
Estimator benchmark: relative estimation error and scenario/setting sweeps.
"""

import logging
from collections.abc import Sequence

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from pydantic import ValidationError

from msiq.models import (
    EmConfig,
    EstimatorKind,
    FragmentLengthModel,
    FragmentSetting,
    GeneModel,
    Hyperparameters,
    IdentificationRow,
    MsiqError,
    ReeAggregate,
    ReeReport,
    ReeRow,
    Scenario,
    ScenarioSpec,
    SimConfig,
    SweepConfig,
    SweepFailure,
)
from msiq.utils.seeding import gene_seed_sequence
from .em import run_estimators
from .gibbs import run_chain
from .read_model import GeneIndex, generating_matrix
from .simulator import simulate_gene

logger = logging.getLogger(__name__)

MSIQ = "msiq"
ESTIMATORS = [MSIQ] + [kind.value for kind in EstimatorKind]


def _check_dimensions(alpha_true: Sequence[float], alpha_hat: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    alpha_true = np.asarray(alpha_true, dtype=np.float64)
    alpha_hat = np.asarray(alpha_hat, dtype=np.float64)
    if alpha_true.shape != alpha_hat.shape:
        raise ValueError(f"dimension mismatch: {alpha_true.shape} and {alpha_hat.shape}")
    return alpha_true, alpha_hat


def ree(alpha_true: Sequence[float], alpha_hat: Sequence[float], *, zero_penalty: float | None = None) -> float:
    """
    Relative estimation error `sum_j |alpha_j - alpha_hat_j| / alpha_j`.

    Coordinates with `alpha_j = 0` contribute nothing when `alpha_hat_j = 0`;
    otherwise they are skipped, or add `zero_penalty` when it is set.

    Raises:
        ValueError: if the vectors have different dimensions
    """
    alpha_true, alpha_hat = _check_dimensions(alpha_true, alpha_hat)
    positive = alpha_true > 0
    value = float(np.sum(np.abs(alpha_true[positive] - alpha_hat[positive]) / alpha_true[positive]))
    if zero_penalty is not None:
        value += zero_penalty * zero_coordinates(alpha_true, alpha_hat)
    return value


def zero_coordinates(alpha_true: Sequence[float], alpha_hat: Sequence[float]) -> int:
    """Number of coordinates with a zero true proportion but a positive estimate."""
    alpha_true, alpha_hat = _check_dimensions(alpha_true, alpha_hat)
    return int(np.sum((alpha_true == 0) & (alpha_hat != 0)))


def task_seed(seed: int, gene_id: str, scenario: int, setting: int, replicate: int) -> np.random.SeedSequence:
    """Seed stream of one sweep cell; independent of the order cells are run in."""
    return gene_seed_sequence(seed, gene_id, scenario, setting, replicate)


def evaluate_gene(
    gene: GeneModel,
    scenario: Scenario,
    setting: FragmentSetting,
    replicate: int,
    cfg: SweepConfig,
) -> tuple[list[ReeRow], IdentificationRow]:
    """
    Simulate one gene in one scenario and setting, then score MSIQ and the six EM-based estimators.

    The generating probabilities use the fragment length model the reads were simulated with.
    Oracle estimators get the true informative indicators recorded in the identification row.
    """
    rng = np.random.default_rng(task_seed(cfg.seed, gene.gene_id, int(scenario), setting.index, replicate))
    spec = ScenarioSpec(scenario_id=scenario, D=cfg.D)
    sim_cfg = SimConfig.from_setting(setting, n_reads=cfg.n_reads, frag_sd=cfg.frag_sd, seed=cfg.seed)
    truth, samples = simulate_gene(gene, spec, sim_cfg, rng, fixed_alpha=cfg.fixed_alpha)

    index = GeneIndex(gene)
    flm = FragmentLengthModel(mean=sim_cfg.frag_mean, sd=sim_cfg.frag_sd)
    H = [generating_matrix(sample.reads, index, flm) for sample in samples]

    hyper = Hyperparameters.broadcast(cfg.lam, gene.n_isoforms, cfg.a, cfg.b)
    chain_seed = int(rng.integers(0, 2**63 - 1))
    summary = run_chain(H, hyper, cfg.iterations, cfg.burn_in, chain_seed)
    reports = run_estimators(
        list(EstimatorKind),
        H,
        EmConfig(tol=cfg.em_tol, max_iter=cfg.em_max_iter),
        true_E=truth.true_E,
        theta_hat=summary.theta_hat,
        threshold=cfg.threshold,
    )

    estimates = [(MSIQ, summary.alpha_hat)] + [(report.kind.value, report.alpha_hat) for report in reports]
    rows = [
        ReeRow(
            gene_id=gene.gene_id,
            scenario=int(scenario),
            setting=setting.index,
            replicate=replicate,
            estimator=name,
            ree=ree(truth.alpha, alpha_hat),
            skipped_coordinates=zero_coordinates(truth.alpha, alpha_hat),
        )
        for name, alpha_hat in estimates
    ]
    identification = IdentificationRow(
        gene_id=gene.gene_id,
        scenario=int(scenario),
        setting=setting.index,
        replicate=replicate,
        true_E=truth.true_E,
        theta_hat=summary.theta_hat,
    )
    return rows, identification


def _evaluate_task(
    gene: GeneModel, scenario: Scenario, setting: FragmentSetting, replicate: int, cfg: SweepConfig
) -> tuple[list[ReeRow], IdentificationRow] | SweepFailure:
    try:
        return evaluate_gene(gene, scenario, setting, replicate, cfg)
    except (MsiqError, ValidationError) as exc:
        code = getattr(exc, "code", "validation_error")
        logger.warning(f"{gene.gene_id} scenario {int(scenario)} setting {setting.index} replicate {replicate}: {exc}")
        return SweepFailure(
            gene_id=gene.gene_id,
            scenario=int(scenario),
            setting=setting.index,
            replicate=replicate,
            error=code,
            message=str(exc),
        )


def sweep(genes: Sequence[GeneModel], cfg: SweepConfig | None = None) -> ReeReport:
    """
    Run every (gene, scenario, setting, replicate) cell and collect the errors of all estimators.

    Cells run on `cfg.workers` processes; results are assembled in cell order, so the report
    does not depend on the number of workers. A failing cell is recorded, not raised.
    """
    cfg = cfg or SweepConfig()
    if not genes:
        raise ValueError("the gene corpus is empty")
    settings = [FragmentSetting.from_index(index) for index in cfg.settings]
    tasks = [
        (gene, scenario, setting, replicate)
        for gene in genes
        for scenario in cfg.scenarios
        for setting in settings
        for replicate in range(cfg.replicates)
    ]
    logger.info(f"Sweep: {len(tasks)} cells on {cfg.workers} workers")
    results = Parallel(n_jobs=cfg.workers)(delayed(_evaluate_task)(*task, cfg) for task in tasks)

    report = ReeReport()
    for result in results:
        if isinstance(result, SweepFailure):
            report.failures.append(result)
        else:
            rows, identification = result
            report.rows.extend(rows)
            report.identification.append(identification)
    report.aggregates = aggregate(report.rows)
    if report.failures:
        logger.warning(f"Sweep: {len(report.failures)}/{len(tasks)} cells failed")
    return report


def rows_frame(rows: Sequence[ReeRow]) -> pd.DataFrame:
    columns = list(ReeRow.model_fields)
    return pd.DataFrame([row.model_dump() for row in rows], columns=columns)


def aggregate(rows: Sequence[ReeRow]) -> list[ReeAggregate]:
    """Count, median, quartiles and mean of the error per (scenario, setting, estimator)."""
    frame = rows_frame(rows)
    if frame.empty:
        return []
    grouped = frame.groupby(["scenario", "setting", "estimator"], sort=True)["ree"]
    summary = pd.DataFrame(
        {
            "n": grouped.count(),
            "median": grouped.median(),
            "q1": grouped.quantile(0.25),
            "q3": grouped.quantile(0.75),
            "mean": grouped.mean(),
        }
    ).reset_index()
    return [
        ReeAggregate(
            scenario=int(record["scenario"]),
            setting=int(record["setting"]),
            estimator=str(record["estimator"]),
            n=int(record["n"]),
            median=float(record["median"]),
            q1=float(record["q1"]),
            q3=float(record["q3"]),
            mean=float(record["mean"]),
        )
        for record in summary.to_dict(orient="records")
    ]


def median_ree(report: ReeReport, scenario: int, setting: int, estimator: str) -> float:
    """Median error of one estimator in one (scenario, setting) cell."""
    for row in report.aggregates:
        if (row.scenario, row.setting, row.estimator) == (scenario, setting, estimator):
            return row.median
    raise KeyError(f"no aggregate for scenario {scenario}, setting {setting}, estimator {estimator}")


def identification_rate(
    report: ReeReport, scenario: int, setting: int | None = None, threshold: float = 0.5
) -> float:
    """Fraction of simulated genes whose informative samples are all correctly identified."""
    rows = [
        row
        for row in report.identification
        if row.scenario == scenario and (setting is None or row.setting == setting)
    ]
    if not rows:
        raise KeyError(f"no identification row for scenario {scenario}, setting {setting}")
    return sum(row.identified(threshold) for row in rows) / len(rows)
