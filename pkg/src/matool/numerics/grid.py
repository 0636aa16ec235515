"""Uniform 2-D grids of log-domain values."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

from .bigscalar import BigScalar
from ..exceptions import DomainError


@dataclass(frozen=True)
class Grid2D:
    """nt x ns tensor grid of BigScalar values on a rectangle.

    Spacing is uniform in each direction; at least 9 nodes per direction so
    4th-order stencils fit everywhere with one-sided shifts at the edges.
    """

    t_range: Tuple[float, float]
    s_range: Tuple[float, float]
    nt: int
    ns: int
    values: List[List[BigScalar]] = field(repr=False)

    def __post_init__(self):
        if self.nt < 9 or self.ns < 9:
            raise DomainError("Grid2D requires nt, ns >= 9")
        if len(self.values) != self.nt or any(len(row) != self.ns for row in self.values):
            raise DomainError("values shape does not match nt x ns")

    @property
    def dt(self) -> float:
        return (self.t_range[1] - self.t_range[0]) / (self.nt - 1)

    @property
    def ds(self) -> float:
        return (self.s_range[1] - self.s_range[0]) / (self.ns - 1)

    def t_nodes(self):
        a, b = self.t_range
        return [a + i * (b - a) / (self.nt - 1) for i in range(self.nt)]

    def s_nodes(self):
        a, b = self.s_range
        return [a + j * (b - a) / (self.ns - 1) for j in range(self.ns)]
