"""
Gene structure models.

A gene is described by its non-overlapping subexons and by isoforms
given as lists of subexon indices. Coordinates are 1-based and inclusive,
strand is ignored.

Two JSON forms are supported:

- the exon form, as found in annotations:
  ```json
  {"gene_id": "g1", "isoforms": [{"isoform_id": "t1", "exons": [[1, 100], [201, 300]]}]}
  ```
- the derived form, produced by subexon derivation:
  ```json
  {"gene_id": "g1", "subexons": [[1, 100], [201, 300]],
   "isoforms": [{"isoform_id": "t1", "subexon_indices": [1, 2]}]}
  ```
"""

from typing import NamedTuple, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator


class GenomicInterval(NamedTuple):
    """
    A closed interval of genomic positions.

    Attributes:
        start: first position (1-based, inclusive)
        end: last position (1-based, inclusive)
    """

    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start + 1


class Isoform(BaseModel):
    """
    An isoform expressed on the subexons of its gene.

    Attributes:
        isoform_id: isoform identifier
        subexon_indices: strictly increasing 1-based subexon indices
    """

    model_config = ConfigDict(frozen=True)

    isoform_id: str
    subexon_indices: tuple[int, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def check_increasing(self) -> Self:
        indices = self.subexon_indices
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError(f"subexon indices of {self.isoform_id} must be strictly increasing: {indices}")
        return self


class GeneModel(BaseModel):
    """
    A gene in derived form.

    Attributes:
        gene_id: gene identifier
        subexons: pairwise disjoint subexons sorted by start position
        isoforms: annotated isoforms (at least one)
    """

    model_config = ConfigDict(frozen=True)

    gene_id: str
    subexons: tuple[GenomicInterval, ...] = Field(min_length=1)
    isoforms: tuple[Isoform, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def check_structure(self) -> Self:
        for interval in self.subexons:
            if interval.start > interval.end:
                raise ValueError(f"{self.gene_id}: subexon {interval} has start > end")
        for previous, current in zip(self.subexons, self.subexons[1:]):
            if current.start <= previous.end:
                raise ValueError(f"{self.gene_id}: subexons {previous} and {current} overlap or are unsorted")
        n = len(self.subexons)
        for isoform in self.isoforms:
            if isoform.subexon_indices[0] < 1 or isoform.subexon_indices[-1] > n:
                raise ValueError(f"{self.gene_id}: isoform {isoform.isoform_id} refers to a subexon outside 1..{n}")
        return self

    @property
    def n_subexons(self) -> int:
        """Number of subexons (N)."""
        return len(self.subexons)

    @property
    def n_isoforms(self) -> int:
        """Number of isoforms (J)."""
        return len(self.isoforms)

    def isoform_intervals(self, j: int) -> list[GenomicInterval]:
        """Subexons of isoform `j` (0-based), in genomic order."""
        return [self.subexons[k - 1] for k in self.isoforms[j].subexon_indices]


class AnnotatedIsoform(BaseModel):
    """
    An isoform in exon form.

    Attributes:
        isoform_id: isoform identifier
        exons: disjoint exon intervals
    """

    isoform_id: str
    exons: list[GenomicInterval] = Field(min_length=1)


class GeneAnnotation(BaseModel):
    """
    A gene in exon form, as read from an annotation file.

    Attributes:
        gene_id: gene identifier
        isoforms: annotated isoforms
    """

    gene_id: str
    isoforms: list[AnnotatedIsoform] = Field(min_length=1)
