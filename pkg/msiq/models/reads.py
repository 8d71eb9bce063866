"""
Read models.

A paired-end read is summarized by the subexons overlapped by each end
and by the four boundary positions of the ends.
"""

from typing import Self

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, model_validator


class SummarizedRead(BaseModel):
    """
    A paired-end read summarized against one gene.

    Attributes:
        read_id: read identifier
        s1: 1-based indices of the subexons overlapped by the left end
        s2: 1-based indices of the subexons overlapped by the right end
        y_first: first position of the left end
        y_left_last: last position of the left end
        y_right_first: first position of the right end
        y_last: last position of the right end
        half_length: number of positions covered by the left end, if known
        right_half_length: number of positions covered by the right end, if known
            (defaults to `half_length`)
    """

    model_config = ConfigDict(frozen=True)

    read_id: str
    s1: tuple[int, ...] = Field(min_length=1)
    s2: tuple[int, ...] = Field(min_length=1)
    y_first: int
    y_left_last: int
    y_right_first: int
    y_last: int
    half_length: PositiveInt | None = None
    right_half_length: PositiveInt | None = None

    @model_validator(mode="after")
    def check_positions(self) -> Self:
        if not (self.y_first <= self.y_left_last <= self.y_right_first <= self.y_last):
            raise ValueError(
                f"read {self.read_id}: positions must satisfy y_first <= y_left_last <= y_right_first <= y_last, "
                f"got {self.positions}"
            )
        for name in ("s1", "s2"):
            indices = getattr(self, name)
            if any(b <= a for a, b in zip(indices, indices[1:])) or indices[0] < 1:
                raise ValueError(f"read {self.read_id}: {name} must hold increasing 1-based indices, got {indices}")
        return self

    @property
    def positions(self) -> tuple[int, int, int, int]:
        return self.y_first, self.y_left_last, self.y_right_first, self.y_last

    @property
    def right_length(self) -> int | None:
        return self.right_half_length if self.right_half_length is not None else self.half_length


class FragmentLengthModel(BaseModel):
    """
    Gaussian model of fragment lengths in one sample.

    Attributes:
        mean: mean fragment length (bp)
        sd: standard deviation of the fragment length (bp)
    """

    mean: PositiveFloat
    sd: PositiveFloat
