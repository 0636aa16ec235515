"""Exact rational geometry of the patch family.

For index n the inner square has side 1/(2n(n+1)) and the outer square side
1/(n(n+1)), both centered at (1/n, 0).  The four collar rectangles sit
between the walls of the inner square and the outer boundary; everything is
held as ``fractions.Fraction`` so containment and disjointness checks are
exact.  Floats are converted to Fractions (floats are dyadic rationals), so
region dispatch on float input is exact as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import List, Tuple

from ..exceptions import DomainError

Rect = Tuple[Fraction, Fraction, Fraction, Fraction]  # x0, x1, y0, y1


def _rect(x0, x1, y0, y1) -> Rect:
    return (Fraction(x0), Fraction(x1), Fraction(y0), Fraction(y1))


@dataclass(frozen=True)
class PatchLayout:
    """All geometry attached to one patch index n."""

    n: int
    center: Tuple[Fraction, Fraction]
    inner: Rect  # X^n
    outer: Rect  # X^n_1
    collar_right: Rect  # +V_n
    collar_left: Rect  # -V_n
    collar_top: Rect  # +H_n
    collar_bottom: Rect  # -H_n
    wall_offset_x: Fraction  # x-coordinate of the right wall (+v_n)
    half_inner: Fraction  # 1/(4n(n+1))
    half_outer: Fraction  # 1/(2n(n+1))
    k_min: int  # smallest k with k > 4n(n+1)/pi

    def local_x(self, x) -> Fraction:
        """x_n = x - (1/n + 1/(4n(n+1))): distance past the right wall."""
        return Fraction(x) - self.wall_offset_x

    def local_y(self, y) -> Fraction:
        """y_n = y + 1/(4n(n+1)): height above the collar floor."""
        return Fraction(y) + self.half_inner

    @property
    def collar_depth(self) -> Fraction:
        """Width of each collar in its oscillation direction."""
        return self.half_inner

    @property
    def collar_height(self) -> Fraction:
        """Extent of the collar in the transverse (cell) direction."""
        return 2 * self.half_inner


def patch_layout(n: int) -> PatchLayout:
    if n < 1:
        raise DomainError("patch index must be >= 1")
    q = (Fraction(1, n), Fraction(0))
    hi = Fraction(1, 4 * n * (n + 1))
    ho = Fraction(1, 2 * n * (n + 1))
    cx, cy = q
    inner = _rect(cx - hi, cx + hi, cy - hi, cy + hi)
    outer = _rect(cx - ho, cx + ho, cy - ho, cy + ho)
    collar_right = _rect(cx + hi, cx + ho, cy - hi, cy + hi)
    collar_left = _rect(cx - ho, cx - hi, cy - hi, cy + hi)
    collar_top = _rect(cx - hi, cx + hi, cy + hi, cy + ho)
    collar_bottom = _rect(cx - hi, cx + hi, cy - ho, cy - hi)
    # smallest integer strictly above 4n(n+1)/pi; pi is irrational so the
    # strict/non-strict distinction cannot bind, but keep a guard digit scan
    target = 4 * n * (n + 1) / math.pi
    k_min = int(math.floor(target)) + 1
    while k_min - 1 > target:
        k_min -= 1
    return PatchLayout(
        n=n,
        center=q,
        inner=inner,
        outer=outer,
        collar_right=collar_right,
        collar_left=collar_left,
        collar_top=collar_top,
        collar_bottom=collar_bottom,
        wall_offset_x=cx + hi,
        half_inner=hi,
        half_outer=ho,
        k_min=k_min,
    )


def oscillation_band(k: int) -> Tuple[float, float]:
    """The k-th oscillation band (1/((k+1)pi), 1/(k pi)) as floats."""
    return (1.0 / (math.pi * (k + 1)), 1.0 / (math.pi * k))


@dataclass(frozen=True)
class MicroRect:
    """One cell of the collar partition: oscillation band x transverse slot."""

    k: int
    i: int
    n: int
    x_band: Tuple[float, float]  # local oscillation coordinate range
    y_band: Tuple[float, float]  # local transverse coordinate range (y_n)
    is_top: bool


def top_cell_index(layout: PatchLayout, k: int) -> int:
    """Largest i whose cell (i*k^{-1/2}, (i+1)*k^{-1/2}) meets the collar.

    Exact integer arithmetic: i <= H*sqrt(k) iff i^2 <= H^2 k (H rational),
    so the largest admissible i is floor(sqrt(H^2 k)) with exact touching
    counted as meeting the collar.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    H = layout.collar_height
    num = H.numerator * H.numerator * k
    den = H.denominator * H.denominator
    return isqrt(num * den) // den


def microrectangles(layout: PatchLayout, k: int) -> List[MicroRect]:
    """Partition of the collar band at oscillation index k into cells."""
    if k < layout.k_min:
        raise DomainError(f"k={k} below the first admissible index {layout.k_min}")
    x_band = oscillation_band(k)
    ibar = top_cell_index(layout, k)
    h = k ** (-0.5)
    out = []
    for i in range(ibar + 1):
        out.append(
            MicroRect(
                k=k,
                i=i,
                n=layout.n,
                x_band=x_band,
                y_band=(i * h, (i + 1) * h),
                is_top=(i == ibar),
            )
        )
    return out


def cell_of(layout: PatchLayout, k: int, y_n: float) -> int:
    """Transverse cell index containing local height y_n (floor rule)."""
    return int(math.floor(y_n * math.sqrt(k)))


def band_of(x_n: float) -> int:
    """Oscillation band index k with x_n in (1/((k+1)pi), 1/(k pi)].

    Returns 0 when x_n is at or below the accumulation point scale
    (never happens for float x_n > 0).
    """
    if x_n <= 0:
        raise DomainError("x_n must be positive")
    return int(math.floor(1.0 / (math.pi * x_n)))


def disjointness_check(n_max: int) -> bool:
    """Exact check that closures of the outer squares are pairwise disjoint.

    Outer squares are ordered along the x-axis, so it suffices to compare
    consecutive intervals; the full pairwise scan is still cheap and kept
    for the stated contract.
    """
    layouts = [patch_layout(n) for n in range(1, n_max + 1)]
    for a in range(len(layouts)):
        xa = layouts[a].outer
        for b in range(a + 1, len(layouts)):
            xb = layouts[b].outer
            # closed intervals [x0, x1] disjoint in x suffices here
            if not (xa[1] < xb[0] or xb[1] < xa[0]):
                return False
    return True
