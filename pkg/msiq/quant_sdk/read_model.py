"""
Read summaries, read/isoform compatibility and generating probabilities.

A read is summarized by the subexons overlapped by each of its ends (`s1`, `s2`)
and by the first and last genomic positions of each end. Isoform indices are 0-based,
subexon indices are 1-based.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.stats import norm

from msiq.models import (
    FragmentLengthModel,
    FragmentModelError,
    GeneModel,
    IncompatibleReadError,
    NoUsableReadsError,
    SummarizedRead,
    UnmappablePositionError,
)
from .gene_model import effective_length, isoform_lengths

logger = logging.getLogger(__name__)


class GeneIndex:
    """
    Position lookups on one gene.

    Maps genomic positions to subexons and to transcript coordinates of each isoform.
    """

    def __init__(self, gene: GeneModel):
        self.gene = gene
        self.starts = np.array([s.start for s in gene.subexons], dtype=np.int64)
        self.ends = np.array([s.end for s in gene.subexons], dtype=np.int64)
        self.lengths = isoform_lengths(gene)
        # rank of each subexon in each isoform, and transcript offset of each subexon start
        self.ranks: list[dict[int, int]] = []
        self.offsets: list[dict[int, int]] = []
        for isoform in gene.isoforms:
            ranks: dict[int, int] = {}
            offsets: dict[int, int] = {}
            offset = 0
            for rank, k in enumerate(isoform.subexon_indices):
                ranks[k] = rank
                offsets[k] = offset
                offset += gene.subexons[k - 1].length
            self.ranks.append(ranks)
            self.offsets.append(offsets)

    @cached_property
    def subexon_sets(self) -> list[frozenset[int]]:
        return [frozenset(isoform.subexon_indices) for isoform in self.gene.isoforms]

    def subexon_of(self, positions: int | Iterable[int]) -> np.ndarray:
        """1-based subexon index of each position, 0 for a position in no subexon."""
        positions = np.atleast_1d(np.asarray(positions, dtype=np.int64))
        k = np.searchsorted(self.starts, positions, side="right") - 1
        outside = (k < 0) | (positions > self.ends[np.clip(k, 0, None)])
        return np.where(outside, 0, k + 1)

    def locate(self, positions: int | Iterable[int]) -> np.ndarray:
        """
        1-based subexon index of each position.

        Raises:
            UnmappablePositionError: if a position falls in no subexon
        """
        positions = np.atleast_1d(np.asarray(positions, dtype=np.int64))
        k = self.subexon_of(positions)
        if not k.all():
            raise UnmappablePositionError(
                f"{self.gene.gene_id}: position {int(positions[k == 0][0])} falls outside every subexon"
            )
        return k

    def transcript_positions(self, j: int, positions: Sequence[int]) -> list[int | None]:
        """1-based positions in isoform `j` of genomic positions, None where the isoform does not cover one."""
        result: list[int | None] = []
        for position, k in zip(positions, self.subexon_of(positions).tolist()):
            offset = self.offsets[j].get(k)
            result.append(None if offset is None else offset + position - self.gene.subexons[k - 1].start + 1)
        return result

    def transcript_position(self, j: int, position: int) -> int | None:
        """1-based position in isoform `j` of a genomic position, None if the isoform does not cover it."""
        return self.transcript_positions(j, [position])[0]

    def genomic_position(self, j: int, t: int) -> int:
        """Genomic position of the 1-based transcript position `t` of isoform `j`."""
        for k in self.gene.isoforms[j].subexon_indices:
            subexon = self.gene.subexons[k - 1]
            offset = self.offsets[j][k]
            if t <= offset + subexon.length:
                return subexon.start + t - offset - 1
        raise IndexError(f"{self.gene.gene_id}: transcript position {t} beyond isoform {j}")

    def genomic_positions(self, j: int, t_first: int, t_last: int) -> list[int]:
        """Genomic positions covered by the transcript span `t_first..t_last` of isoform `j`."""
        positions: list[int] = []
        for k in self.gene.isoforms[j].subexon_indices:
            subexon = self.gene.subexons[k - 1]
            offset = self.offsets[j][k]
            lo = max(t_first, offset + 1)
            hi = min(t_last, offset + subexon.length)
            if lo <= hi:
                positions.extend(range(subexon.start + lo - offset - 1, subexon.start + hi - offset))
        return positions

    def _consecutive(self, j: int, indices: Sequence[int]) -> bool:
        ranks = [self.ranks[j][k] for k in indices]
        return ranks == list(range(ranks[0], ranks[0] + len(ranks)))

    def is_compatible(self, read: SummarizedRead, j: int) -> bool:
        # (a) every overlapped subexon belongs to the isoform
        if not self.subexon_sets[j].issuperset(read.s1 + read.s2):
            return False
        # (b) each end covers consecutive subexons of the isoform
        if not (self._consecutive(j, read.s1) and self._consecutive(j, read.s2)):
            return False
        t_first, t_left_last, t_right_first, t_last = self.transcript_positions(j, read.positions)
        if None in (t_first, t_left_last, t_right_first, t_last):
            return False
        # (c) each end is contiguous in transcript coordinates
        if read.half_length is not None and t_left_last - t_first + 1 != read.half_length:
            return False
        if read.right_length is not None and t_last - t_right_first + 1 != read.right_length:
            return False
        # (d) the fragment lies inside the isoform, left end first
        return 1 <= t_first <= t_left_last <= t_right_first <= t_last <= self.lengths[j]

    def compatible_isoforms(self, read: SummarizedRead) -> set[int]:
        return {j for j in range(self.gene.n_isoforms) if self.is_compatible(read, j)}

    def fragment_length(self, read: SummarizedRead, j: int) -> int:
        if not self.is_compatible(read, j):
            raise IncompatibleReadError(f"{self.gene.gene_id}: read {read.read_id} is not compatible with isoform {j}")
        return self.transcript_position(j, read.y_last) - self.transcript_position(j, read.y_first) + 1


def positions_from_intervals(text: str) -> list[int]:
    """
    Expand covered intervals written as `a-b,c-d` into the list of covered positions.

    Example:
        >>> positions_from_intervals("3-5,8-8")
        [3, 4, 5, 8]
    """
    positions: list[int] = []
    for part in text.split(","):
        start, _, end = part.strip().partition("-")
        positions.extend(range(int(start), int(end or start) + 1))
    return positions


def summarize_read(
    covered_positions_left: Sequence[int],
    covered_positions_right: Sequence[int],
    gene: GeneModel | GeneIndex,
    read_id: str = "read",
) -> SummarizedRead:
    """
    Summarize a paired-end read against a gene.

    Args:
        covered_positions_left: sorted genomic positions covered by the left end
        covered_positions_right: sorted genomic positions covered by the right end
        gene: gene (or its index)
        read_id: read identifier

    Returns:
        The summarized read; end lengths are the numbers of covered positions.

    Raises:
        UnmappablePositionError: if a covered position falls in no subexon
        ValueError: on empty or unsorted position lists
    """
    index = gene if isinstance(gene, GeneIndex) else GeneIndex(gene)
    left = np.asarray(covered_positions_left, dtype=np.int64)
    right = np.asarray(covered_positions_right, dtype=np.int64)
    if left.size == 0 or right.size == 0:
        raise ValueError(f"read {read_id}: both ends must cover at least one position")
    if np.any(np.diff(left) <= 0) or np.any(np.diff(right) <= 0):
        raise ValueError(f"read {read_id}: covered positions must be sorted ascending")

    s1 = np.unique(index.locate(left))
    s2 = np.unique(index.locate(right))
    return SummarizedRead(
        read_id=read_id,
        s1=tuple(int(k) for k in s1),
        s2=tuple(int(k) for k in s2),
        y_first=int(left[0]),
        y_left_last=int(left[-1]),
        y_right_first=int(right[0]),
        y_last=int(right[-1]),
        half_length=int(left.size),
        right_half_length=int(right.size) if right.size != left.size else None,
    )


def compatible_isoforms(read: SummarizedRead, gene: GeneModel | GeneIndex) -> set[int]:
    """
    0-based indices of the isoforms a read can originate from.

    An isoform is compatible when it contains every overlapped subexon,
    each end covers consecutive subexons of the isoform and is contiguous in
    transcript coordinates, and the whole fragment lies within the isoform.
    """
    index = gene if isinstance(gene, GeneIndex) else GeneIndex(gene)
    return index.compatible_isoforms(read)


def fragment_length(read: SummarizedRead, j: int, gene: GeneModel | GeneIndex) -> int:
    """
    Fragment length of a read if it originates from isoform `j`.

    Raises:
        IncompatibleReadError: if the read cannot originate from isoform `j`
    """
    index = gene if isinstance(gene, GeneIndex) else GeneIndex(gene)
    return index.fragment_length(read, j)


@dataclass(frozen=True)
class GeneratingMatrix:
    """
    Generating probabilities of the reads of one sample.

    Attributes:
        values: `n x J` matrix, zero exactly for incompatible (read, isoform) pairs
        read_ids: identifiers of the kept reads, in row order
        dropped_read_ids: reads compatible with no isoform
    """

    values: np.ndarray
    read_ids: tuple[str, ...] = ()
    dropped_read_ids: tuple[str, ...] = field(default=())

    @property
    def n_reads(self) -> int:
        return self.values.shape[0]

    @property
    def n_isoforms(self) -> int:
        return self.values.shape[1]


def generating_matrix(
    reads: Sequence[SummarizedRead],
    gene: GeneModel | GeneIndex,
    flm: FragmentLengthModel,
) -> GeneratingMatrix:
    """
    Generating probability of every read under every isoform.

    `h = pdf(L; mean, sd) / effective_length`, the Gaussian density being evaluated at
    the integer fragment length. Rows without any positive entry are dropped.

    Raises:
        NoUsableReadsError: if no read is left
    """
    index = gene if isinstance(gene, GeneIndex) else GeneIndex(gene)
    n_isoforms = index.gene.n_isoforms
    eff = np.array([effective_length(length, flm.mean) for length in index.lengths], dtype=np.float64)

    values = np.zeros((len(reads), n_isoforms), dtype=np.float64)
    for i, read in enumerate(reads):
        for j in range(n_isoforms):
            if index.is_compatible(read, j):
                length = index.transcript_position(j, read.y_last) - index.transcript_position(j, read.y_first) + 1
                values[i, j] = norm.pdf(length, loc=flm.mean, scale=flm.sd) / eff[j]

    keep = values.max(axis=1, initial=0.0) > 0
    dropped = tuple(read.read_id for read, k in zip(reads, keep) if not k)
    if dropped:
        logger.info(f"{index.gene.gene_id}: dropped {len(dropped)}/{len(reads)} reads compatible with no isoform")
        logger.debug(f"{index.gene.gene_id}: dropped reads {list(dropped)}")
    if not keep.any():
        raise NoUsableReadsError(f"{index.gene.gene_id}: no read is compatible with any isoform")
    return GeneratingMatrix(
        values=values[keep],
        read_ids=tuple(read.read_id for read, k in zip(reads, keep) if k),
        dropped_read_ids=dropped,
    )


def estimate_fragment_params(single_isoform_reads: Iterable[tuple[SummarizedRead, GeneModel]]) -> FragmentLengthModel:
    """
    Estimate the fragment length model from reads of single-isoform genes.

    Args:
        single_isoform_reads: reads paired with the single-isoform gene they were summarized against

    Returns:
        Sample mean and sample standard deviation (n - 1 denominator, floored at 1 bp).

    Raises:
        FragmentModelError: on a multi-isoform gene or fewer than 2 usable reads
    """
    indexes: dict[str, GeneIndex] = {}
    lengths: list[int] = []
    for read, gene in single_isoform_reads:
        if gene.n_isoforms != 1:
            raise FragmentModelError(f"{gene.gene_id} has {gene.n_isoforms} isoforms, expected 1")
        index = indexes.setdefault(gene.gene_id, GeneIndex(gene))
        if not index.is_compatible(read, 0):
            logger.debug(f"{gene.gene_id}: read {read.read_id} skipped, incompatible with the isoform")
            continue
        lengths.append(index.fragment_length(read, 0))

    if len(lengths) < 2:
        raise FragmentModelError(f"{len(lengths)} usable reads, at least 2 are needed")
    values = np.asarray(lengths, dtype=np.float64)
    sd = float(np.std(values, ddof=1))
    if sd < 1.0:
        logger.warning(f"Fragment length sd {sd:.3g} floored at 1 bp")
        sd = 1.0
    return FragmentLengthModel(mean=float(values.mean()), sd=sd)
