"""
Command line options shared by the `msiq-quant` subcommands.

Every option falls back to an `MSIQ_<NAME>` environment variable.
"""

from enum import Enum
from pathlib import Path
from typing import Annotated

import typer

from msiq.models import EstimatorKind


class Method(str, Enum):
    """Estimators selectable with `--method`"""

    msiq = "msiq"
    avg = "avg"
    pool = "pool"
    avg_oracle = "avg-oracle"
    pool_oracle = "pool-oracle"
    msiqa = "msiqa"
    msiqp = "msiqp"
    all = "all"

    @property
    def kind(self) -> EstimatorKind | None:
        """EM-based estimator of the method, None for `msiq` and `all`."""
        try:
            return EstimatorKind(self.value)
        except ValueError:
            return None


AnnotationOption = Annotated[
    Path,
    typer.Option(
        "--annotation",
        help="Gene annotation JSON (exon form)",
        envvar="MSIQ_ANNOTATION",
    ),
]
OptionalAnnotationOption = Annotated[
    Path | None,
    typer.Option(
        "--annotation",
        help="Gene annotation JSON (exon form), a random gene corpus is used if not set",
        envvar="MSIQ_ANNOTATION",
    ),
]
ReadsDirOption = Annotated[
    Path,
    typer.Option(
        "--reads-dir",
        help="Directory holding one `sample_<dd>` directory of read TSV files per sample",
        envvar="MSIQ_READS_DIR",
    ),
]
OutOption = Annotated[
    Path,
    typer.Option(
        "-o",
        "--out",
        help="Output directory",
        envvar="MSIQ_OUT",
    ),
]
SeedOption = Annotated[
    int,
    typer.Option(
        "--seed",
        help="Master seed",
        envvar="MSIQ_SEED",
    ),
]
LambdaOption = Annotated[
    str,
    typer.Option(
        "--lambda",
        help="Dirichlet prior parameter: a scalar for every isoform, or comma-separated values, one per isoform",
        envvar="MSIQ_LAMBDA",
    ),
]
AOption = Annotated[
    float,
    typer.Option(
        "--a",
        help="First Beta prior parameter of the informative group proportion",
        envvar="MSIQ_A",
    ),
]
BOption = Annotated[
    float,
    typer.Option(
        "--b",
        help="Second Beta prior parameter of the informative group proportion",
        envvar="MSIQ_B",
    ),
]
IterationsOption = Annotated[
    int,
    typer.Option(
        "--iterations",
        help="Retained Gibbs iterations",
        envvar="MSIQ_ITERATIONS",
    ),
]
BurnInOption = Annotated[
    int,
    typer.Option(
        "--burnin",
        help="Discarded Gibbs iterations",
        envvar="MSIQ_BURNIN",
    ),
]
FragMeanOption = Annotated[
    float,
    typer.Option(
        "--frag-mean",
        help="Mean fragment length (bp)",
        envvar="MSIQ_FRAG_MEAN",
    ),
]
FragSdOption = Annotated[
    float,
    typer.Option(
        "--frag-sd",
        help="Fragment length standard deviation (bp)",
        envvar="MSIQ_FRAG_SD",
    ),
]
ReadLenOption = Annotated[
    int,
    typer.Option(
        "--read-len",
        help="Length of each read end (bp)",
        envvar="MSIQ_READ_LEN",
    ),
]
NReadsOption = Annotated[
    int,
    typer.Option(
        "--n-reads",
        help="Reads per gene and sample",
        envvar="MSIQ_N_READS",
    ),
]
NGenesOption = Annotated[
    int,
    typer.Option(
        "--n-genes",
        help="Number of random genes",
        envvar="MSIQ_N_GENES",
    ),
]
ThresholdOption = Annotated[
    float,
    typer.Option(
        "--threshold",
        help="Samples with a membership probability strictly above the threshold are called informative",
        envvar="MSIQ_THRESHOLD",
    ),
]
WorkersOption = Annotated[
    int,
    typer.Option(
        "-w",
        "--workers",
        help="Parallel workers (gene level)",
        envvar="MSIQ_WORKERS",
    ),
]
EmTolOption = Annotated[
    float,
    typer.Option(
        "--em-tol",
        help="EM stops when the log-likelihood improves by less than this value",
        envvar="MSIQ_EM_TOL",
    ),
]
EmMaxIterOption = Annotated[
    int,
    typer.Option(
        "--em-max-iter",
        help="Maximum EM iterations",
        envvar="MSIQ_EM_MAX_ITER",
    ),
]
