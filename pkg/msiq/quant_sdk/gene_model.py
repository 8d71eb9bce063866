"""
Gene structure operations: subexon derivation and isoform lengths.
"""

import logging
from collections.abc import Sequence

from msiq.models import AnnotatedIsoform, AnnotationError, GeneAnnotation, GeneModel, GenomicInterval, Isoform

logger = logging.getLogger(__name__)


def _merge(intervals: list[GenomicInterval]) -> list[GenomicInterval]:
    """Union of intervals as sorted disjoint intervals (touching intervals are merged)."""
    merged: list[GenomicInterval] = []
    for interval in sorted(intervals):
        if merged and interval.start <= merged[-1].end + 1:
            last = merged[-1]
            merged[-1] = GenomicInterval(last.start, max(last.end, interval.end))
        else:
            merged.append(interval)
    return merged


def derive_subexons(
    isoform_exon_intervals: Sequence[Sequence[GenomicInterval | tuple[int, int]]],
    *,
    gene_id: str = "gene",
    isoform_ids: Sequence[str] | None = None,
) -> GeneModel:
    """
    Split the exons of a gene into non-overlapping subexons.

    Subexon boundaries are the union of all exon start and end points,
    so every isoform is a union of whole subexons.

    Args:
        isoform_exon_intervals: exons of each isoform
        gene_id: gene identifier
        isoform_ids: isoform identifiers, `<gene_id>.<n>` if not set

    Returns:
        The gene in derived form.

    Raises:
        AnnotationError: on empty input, overlapping exons inside one isoform,
            or an isoform that cannot be rebuilt from whole subexons
    """
    if not isoform_exon_intervals:
        raise AnnotationError(f"{gene_id}: no isoform")
    if isoform_ids is None:
        isoform_ids = [f"{gene_id}.{n + 1}" for n in range(len(isoform_exon_intervals))]
    if len(isoform_ids) != len(isoform_exon_intervals):
        raise AnnotationError(f"{gene_id}: {len(isoform_ids)} ids for {len(isoform_exon_intervals)} isoforms")

    isoforms: list[list[GenomicInterval]] = []
    for isoform_id, exons in zip(isoform_ids, isoform_exon_intervals):
        if not exons:
            raise AnnotationError(f"{gene_id}: isoform {isoform_id} has no exon")
        intervals = sorted(GenomicInterval(int(start), int(end)) for start, end in exons)
        for interval in intervals:
            if interval.start > interval.end:
                raise AnnotationError(f"{gene_id}: exon {interval} of {isoform_id} has start > end")
        for previous, current in zip(intervals, intervals[1:]):
            if current.start <= previous.end:
                raise AnnotationError(f"{gene_id}: exons {previous} and {current} of {isoform_id} overlap")
        isoforms.append(intervals)

    # A new subexon starts at every exon start and right after every exon end
    cuts = sorted({i.start for exons in isoforms for i in exons} | {i.end + 1 for exons in isoforms for i in exons})
    subexons: list[GenomicInterval] = []
    for block in _merge([i for exons in isoforms for i in exons]):
        start = block.start
        for cut in cuts:
            if block.start < cut <= block.end:
                subexons.append(GenomicInterval(start, cut - 1))
                start = cut
        subexons.append(GenomicInterval(start, block.end))

    models: list[Isoform] = []
    for isoform_id, exons in zip(isoform_ids, isoforms):
        indices = [
            k + 1
            for k, subexon in enumerate(subexons)
            if any(exon.start <= subexon.start and subexon.end <= exon.end for exon in exons)
        ]
        if sum(subexons[k - 1].length for k in indices) != sum(exon.length for exon in exons):
            raise AnnotationError(f"{gene_id}: isoform {isoform_id} is not a union of whole subexons")
        models.append(Isoform(isoform_id=isoform_id, subexon_indices=tuple(indices)))

    gene = GeneModel(gene_id=gene_id, subexons=tuple(subexons), isoforms=tuple(models))
    logger.debug(f"{gene_id}: {gene.n_subexons} subexons, {gene.n_isoforms} isoforms")
    return gene


def gene_from_annotation(annotation: GeneAnnotation) -> GeneModel:
    """Derive the subexon form of an annotated gene."""
    return derive_subexons(
        [isoform.exons for isoform in annotation.isoforms],
        gene_id=annotation.gene_id,
        isoform_ids=[isoform.isoform_id for isoform in annotation.isoforms],
    )


def annotation_from_gene(gene: GeneModel) -> GeneAnnotation:
    """Exon form of a gene; adjacent subexons of an isoform are joined into one exon."""
    return GeneAnnotation(
        gene_id=gene.gene_id,
        isoforms=[
            AnnotatedIsoform(isoform_id=isoform.isoform_id, exons=_merge(gene.isoform_intervals(j)))
            for j, isoform in enumerate(gene.isoforms)
        ],
    )


def isoform_length(gene: GeneModel, j: int) -> int:
    """
    Length of an isoform.

    Args:
        gene: gene model
        j: 0-based isoform index

    Returns:
        Sum of the lengths of the isoform subexons (bp).

    Raises:
        AnnotationError: if `j` is not an isoform index of the gene
    """
    if not 0 <= j < gene.n_isoforms:
        raise AnnotationError(f"{gene.gene_id}: isoform index {j} out of range 0..{gene.n_isoforms - 1}")
    return sum(interval.length for interval in gene.isoform_intervals(j))


def isoform_lengths(gene: GeneModel) -> list[int]:
    return [isoform_length(gene, j) for j in range(gene.n_isoforms)]


def effective_length(l_j: int, mean_frag: float) -> int:
    """
    Number of possible fragment start positions on an isoform.

    The mean fragment length is rounded half to even; the result is clamped to 1
    so short isoforms keep a defined generating probability.
    """
    return max(int(l_j) - round(mean_frag), 1)
