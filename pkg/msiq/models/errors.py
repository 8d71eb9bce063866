"""
Exceptions raised by the quantification library.

Each exception carries a short `code` which the command line tool reports
in its machine-readable error output.
"""


class MsiqError(Exception):
    """Base class of all errors raised by msiq."""

    code = "msiq_error"


class AnnotationError(MsiqError):
    """Exception raised when a gene annotation is malformed.

    Raised for empty annotations, overlapping exons inside one isoform,
    isoforms that cannot be expressed as a union of whole subexons
    and isoform indices out of range.
    """

    code = "annotation_error"


class UnmappablePositionError(MsiqError):
    """Exception raised when a read position falls in no subexon (intron or outside the gene)."""

    code = "unmappable_position"


class IncompatibleReadError(MsiqError):
    """Exception raised when a read cannot originate from the requested isoform."""

    code = "incompatible_read"


class NoUsableReadsError(MsiqError):
    """Exception raised when a sample has no read compatible with any isoform."""

    code = "no_usable_reads"


class FragmentModelError(MsiqError):
    """Exception raised when fragment length parameters cannot be estimated."""

    code = "fragment_model_error"


class ChainStateError(MsiqError):
    """Exception raised when a Gibbs chain state breaks its invariants.

    Typical causes: a read assigned to an isoform with a zero generating
    probability, inconsistent dimensions (a prior with the wrong number of
    isoforms included), or negative iteration counts.
    """

    code = "chain_state_error"


class EnumerationTooLargeError(MsiqError):
    """Exception raised when exact posterior enumeration exceeds its configuration budget."""

    code = "enumeration_too_large"


class EmMonotonicityError(MsiqError):
    """Exception raised when an EM iteration decreases the log-likelihood."""

    code = "em_monotonicity"


class EstimatorInputError(MsiqError):
    """Exception raised when an estimator is called without the inputs it needs.

    Oracle estimators need the true informative indicators,
    MSIQ-based estimators need the posterior membership probabilities.
    """

    code = "estimator_input_error"


class ScenarioError(MsiqError):
    """Exception raised for an invalid heterogeneity scenario."""

    code = "scenario_error"


class SimulationError(MsiqError):
    """Exception raised when reads cannot be simulated in strict mode."""

    code = "simulation_error"
