import numpy as np
import pytest

from msiq.models import GeneModel, GenomicInterval, Isoform
from msiq.quant_sdk import GeneIndex, derive_subexons


@pytest.fixture
def splice_gene() -> GeneModel:
    """Three isoforms cut into four subexons: [1,50], [51,100], [201,250], [251,300]."""
    return derive_subexons(
        [
            [(1, 100), (201, 300)],
            [(1, 50), (201, 300)],
            [(1, 100), (251, 300)],
        ],
        gene_id="splice",
    )


@pytest.fixture
def table_gene() -> GeneModel:
    """Isoform 0 skips subexon 3, isoform 1 keeps every subexon."""
    return GeneModel(
        gene_id="table",
        subexons=(
            GenomicInterval(1, 300),
            GenomicInterval(350, 400),
            GenomicInterval(450, 500),
            GenomicInterval(510, 600),
        ),
        isoforms=(
            Isoform(isoform_id="iso1", subexon_indices=(1, 2, 4)),
            Isoform(isoform_id="iso2", subexon_indices=(1, 2, 3, 4)),
        ),
    )


@pytest.fixture
def table_index(table_gene) -> GeneIndex:
    return GeneIndex(table_gene)


@pytest.fixture
def single_gene() -> GeneModel:
    return derive_subexons([[(1, 400), (501, 900)]], gene_id="single")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)
