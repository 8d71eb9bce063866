from .em import EmResult, em_single_sample, estimate, run_em, run_estimators
from .evaluation import aggregate, evaluate_gene, identification_rate, median_ree, ree, sweep, zero_coordinates
from .gene_model import (
    annotation_from_gene,
    derive_subexons,
    effective_length,
    gene_from_annotation,
    isoform_length,
    isoform_lengths,
)
from .gibbs import (
    ChainState,
    CollapsedGibbsSampler,
    e_success_probability,
    exact_posterior,
    log_collapsed_joint,
    log_configuration_weight,
    run_chain,
    sample_E,
    sample_gamma,
    sample_Z,
    z_probabilities,
)
from .read_model import (
    GeneIndex,
    GeneratingMatrix,
    compatible_isoforms,
    estimate_fragment_params,
    fragment_length,
    generating_matrix,
    positions_from_intervals,
    summarize_read,
)
from .simulator import (
    SimulatedReads,
    gen_proportions,
    make_scenario,
    random_corpus,
    random_gene,
    simulate_gene,
    simulate_reads,
)

__all__ = [
    "ChainState",
    "CollapsedGibbsSampler",
    "EmResult",
    "GeneIndex",
    "GeneratingMatrix",
    "SimulatedReads",
    "aggregate",
    "annotation_from_gene",
    "compatible_isoforms",
    "derive_subexons",
    "e_success_probability",
    "effective_length",
    "em_single_sample",
    "estimate",
    "estimate_fragment_params",
    "evaluate_gene",
    "exact_posterior",
    "fragment_length",
    "gen_proportions",
    "gene_from_annotation",
    "generating_matrix",
    "identification_rate",
    "isoform_length",
    "isoform_lengths",
    "log_collapsed_joint",
    "log_configuration_weight",
    "make_scenario",
    "median_ree",
    "positions_from_intervals",
    "random_corpus",
    "random_gene",
    "ree",
    "run_chain",
    "run_em",
    "run_estimators",
    "sample_E",
    "sample_gamma",
    "sample_Z",
    "simulate_gene",
    "simulate_reads",
    "summarize_read",
    "sweep",
    "z_probabilities",
]
