"""Finite-difference derivatives with Richardson extrapolation.

Mixed partials up to total order 3 are built by composing centered 1-D
stencils per axis.  The reported error estimate is the larger of the two
highest-level Richardson differences (conservative tie-break).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

from ..exceptions import DomainError

# centered stencils: {order: {accuracy: (offsets, coeffs)}}
_STENCILS = {
    1: {
        2: ((-1, 1), (-0.5, 0.5)),
        4: ((-2, -1, 1, 2), (1 / 12, -2 / 3, 2 / 3, -1 / 12)),
    },
    2: {
        2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
        4: ((-2, -1, 0, 1, 2), (-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12)),
    },
    3: {
        2: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
        4: ((-3, -2, -1, 1, 2, 3), (1 / 8, -1.0, 13 / 8, -13 / 8, 1.0, -1 / 8)),
    },
}


@dataclass(frozen=True)
class FDScheme:
    order: int = 4  # accuracy order, 2 or 4
    h: float = 1e-4
    richardson_levels: int = 2

    def __post_init__(self):
        if self.order not in (2, 4):
            raise DomainError("FD accuracy order must be 2 or 4")
        if self.h <= 0:
            raise DomainError("FD step must be positive")
        if self.richardson_levels < 0:
            raise DomainError("richardson_levels must be >= 0")


def _axis_offsets(multi_index: Sequence[int], scheme_order: int):
    """Tensor stencil: list of (offset vector, coefficient, h-power)."""
    pts = [((), 1.0)]
    for axis, der in enumerate(multi_index):
        if der == 0:
            new = [(off + (0,), c) for off, c in pts]
        else:
            offsets, coeffs = _STENCILS[der][scheme_order]
            new = []
            for off, c in pts:
                for o, w in zip(offsets, coeffs):
                    new.append((off + (o,), c * w))
        pts = new
    return pts


def _apply(f: Callable, point, multi_index, h, scheme_order, domain):
    total_order = sum(multi_index)
    pts = _axis_offsets(multi_index, scheme_order)
    acc = 0.0
    for off, c in pts:
        x = tuple(p + o * h for p, o in zip(point, off))
        if domain is not None:
            for xi, (lo, hi) in zip(x, domain):
                if not (lo <= xi <= hi):
                    raise DomainError(f"stencil point {x} exits domain")
        acc += c * _scalar(f, x)
    return acc / h**total_order


def _scalar(f, x):
    return f(*x) if len(x) > 1 else f(x[0])


def fd_derivative(
    f: Callable,
    point,
    multi_index: Sequence[int],
    scheme: FDScheme = FDScheme(),
    domain: Optional[Sequence[Tuple[float, float]]] = None,
) -> Tuple[float, float]:
    """Partial derivative of ``f`` at ``point`` for a multi-index of total
    order <= 3; returns (value, error estimate)."""
    if isinstance(point, (int, float)):
        point = (float(point),)
    multi_index = tuple(int(m) for m in multi_index)
    if len(multi_index) != len(point):
        raise DomainError("multi_index length must match point dimension")
    if sum(multi_index) == 0:
        return _scalar(f, tuple(point)), 0.0
    if sum(multi_index) > 3 or any(m < 0 or m > 3 for m in multi_index):
        raise DomainError("multi_index must have total order in [1, 3]")

    # Richardson table over h, h/2, h/4, ...
    levels = scheme.richardson_levels
    vals = [
        _apply(f, point, multi_index, scheme.h / 2**j, scheme.order, domain)
        for j in range(levels + 1)
    ]
    p = scheme.order
    table = [vals]
    for m in range(1, levels + 1):
        fac = 2.0 ** (p + 2 * (m - 1))
        prev = table[-1]
        table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1.0) for i in range(len(prev) - 1)])
    best = table[-1][-1]
    if levels == 0:
        # crude estimate: one step halving would be needed for better
        return best, abs(best) * (0.5**p) + 1e-300
    # the two highest-level differences; report the larger (conservative)
    e1 = abs(table[-1][-1] - table[-2][-1])
    e2 = abs(table[-2][-1] - table[-3][-1]) if levels >= 2 else e1
    return best, max(e1, e2)
