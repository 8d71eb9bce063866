from .errors import (  # noqa
    AnnotationError,
    ChainStateError,
    EmMonotonicityError,
    EnumerationTooLargeError,
    EstimatorInputError,
    FragmentModelError,
    IncompatibleReadError,
    MsiqError,
    NoUsableReadsError,
    ScenarioError,
    SimulationError,
    UnmappablePositionError,
)
from .gene import (  # noqa
    AnnotatedIsoform,
    GeneAnnotation,
    GeneModel,
    GenomicInterval,
    Isoform,
)
from .inference import (  # noqa
    EmConfig,
    EstimatorKind,
    EstimatorReport,
    GeneResult,
    Hyperparameters,
    PosteriorSummary,
    Provenance,
    informative_indices,
)
from .reads import (  # noqa
    FragmentLengthModel,
    SummarizedRead,
)
from .report import (  # noqa
    IdentificationRow,
    ReeAggregate,
    ReeReport,
    ReeRow,
    SweepConfig,
    SweepFailure,
)
from .simulation import (  # noqa
    FragmentSetting,
    GeneCorpusConfig,
    Scenario,
    ScenarioSpec,
    SimConfig,
    SimulationTruth,
)
