"""Classical RK4 integration with adaptive step halving and dense output.

Works for float state or any state supporting +, scalar *, and abs ordering
(BigScalar qualifies).  Dense output interpolates with cubic Hermite using
the stored endpoint slopes, preserving 4th-order accuracy between accepted
nodes for smooth right-hand sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List

from ..exceptions import StiffnessAbort, DomainError


@dataclass
class DenseSolution:
    ts: List[float]
    ys: List
    slopes: List
    complete: bool = True

    def at(self, t: float):
        ts = self.ts
        if not (min(ts[0], ts[-1]) - 1e-12 <= t <= max(ts[0], ts[-1]) + 1e-12):
            raise DomainError(f"t={t} outside solution range")
        # locate bracketing interval (ts monotone)
        lo, hi = 0, len(ts) - 1
        increasing = ts[-1] >= ts[0]
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if (ts[mid] <= t) == increasing:
                lo = mid
            else:
                hi = mid
        t0, t1 = ts[lo], ts[hi]
        if t1 == t0:
            return self.ys[lo]
        h = t1 - t0
        u = (t - t0) / h
        y0, y1 = self.ys[lo], self.ys[hi]
        f0, f1 = self.slopes[lo], self.slopes[hi]
        h00 = 2 * u**3 - 3 * u**2 + 1
        h10 = u**3 - 2 * u**2 + u
        h01 = -2 * u**3 + 3 * u**2
        h11 = u**3 - u**2
        return y0 * h00 + f0 * (h * h10) + y1 * h01 + f1 * (h * h11)

    def end_value(self):
        return self.ys[-1]


def _rk4_step(rhs, t, y, h):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + k1 * (0.5 * h))
    k3 = rhs(t + 0.5 * h, y + k2 * (0.5 * h))
    k4 = rhs(t + h, y + k3 * h)
    return y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)


def _err_norm(a, b):
    d = a - b
    try:
        return abs(float(d))
    except (OverflowError, TypeError):
        return abs(d)  # BigScalar path; compared against BigScalar tolerance


def ode_solve(
    rhs: Callable,
    y0,
    t_span,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-14,
    initial_step: float = None,
    max_nodes: int = 200000,
) -> DenseSolution:
    """Integrate y' = rhs(t, y) over t_span with adaptive RK4.

    Local error is estimated by step doubling; steps shrink near stiffness
    and the run aborts (with the partial solution attached) once the step
    falls below 1e-14 of the interval length.
    """
    t0, t1 = t_span
    if t1 == t0:
        return DenseSolution([t0], [y0], [rhs(t0, y0)])
    span = t1 - t0
    h = initial_step if initial_step is not None else span / 64.0
    if h * span < 0:
        h = -h
    min_h = abs(span) * 1e-14

    ts = [t0]
    ys = [y0]
    slopes = [rhs(t0, y0)]
    t, y = t0, y0
    while (t - t1) * (1 if span > 0 else -1) < 0:
        if abs(h) < min_h:
            raise StiffnessAbort(
                f"step underflow at t={t}",
                partial=DenseSolution(ts, ys, slopes, complete=False),
            )
        if (t + h - t1) * (1 if span > 0 else -1) > 0:
            h = t1 - t
        y_full = _rk4_step(rhs, t, y, h)
        y_half = _rk4_step(rhs, t + 0.5 * h, _rk4_step(rhs, t, y, 0.5 * h), 0.5 * h)
        err = _err_norm(y_full, y_half)
        try:
            scale = abs_tol + rel_tol * max(abs(float(y_half)), abs(float(y)))
        except (OverflowError, TypeError):
            scale = abs(y_half) * rel_tol + abs_tol
        accept = not (err > scale)
        if accept:
            t = t + h
            # local extrapolation: the halved result is 5th-order accurate
            y = y_half
            ts.append(t)
            ys.append(y)
            slopes.append(rhs(t, y))
            if len(ts) > max_nodes:
                raise StiffnessAbort(
                    "node budget exhausted",
                    partial=DenseSolution(ts, ys, slopes, complete=False),
                )
            grow = 2.0 if (not err > scale * (1.0 / 32.0)) else 1.0
            h *= grow
        else:
            h *= 0.5
    return DenseSolution(ts, ys, slopes)
