"""Adaptive bisection and tanh-sinh quadrature with log-domain accumulation.

Integrands may return floats or BigScalars; panel sums are accumulated with
log-sum-exp so integrals of magnitude exp(-1000) survive.  tanh-sinh is the
method of choice when the integrand decays flat (all derivatives vanish) or
is singular at an endpoint; adaptive bisection (Simpson-based) elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .bigscalar import BigScalar, lse_sum, DEFAULT_PRECISION_BITS
from ..exceptions import DomainError, ToleranceNotMet


@dataclass(frozen=True)
class QuadratureSpec:
    method: str = "adaptive-bisection"  # or "tanh-sinh"
    abs_tol: BigScalar = None
    rel_tol: float = 1e-10
    max_depth: int = 48

    def __post_init__(self):
        if self.method not in ("adaptive-bisection", "tanh-sinh"):
            raise DomainError(f"unknown quadrature method {self.method!r}")
        if not (0.0 < self.rel_tol < 1.0):
            raise DomainError("rel_tol must lie in (0, 1)")
        if self.max_depth > 60 or self.max_depth < 1:
            raise DomainError("max_depth must lie in [1, 60]")
        if self.abs_tol is None:
            object.__setattr__(self, "abs_tol", BigScalar.from_ln(1, -6000.0))


def _as_big(x, bits) -> BigScalar:
    if isinstance(x, BigScalar):
        return x
    return BigScalar.from_float(x, bits)


def _tolerance_met(err: BigScalar, val: BigScalar, spec: QuadratureSpec) -> bool:
    if err.is_zero():
        return True
    bound = abs(val) * spec.rel_tol
    if bound < spec.abs_tol:
        bound = spec.abs_tol
    return err <= bound


def integrate_1d(
    f: Callable,
    interval: Tuple[float, float],
    spec: QuadratureSpec = None,
    bits: int = None,
) -> Tuple[BigScalar, BigScalar]:
    """Integrate ``f`` over an open interval; returns (value, error estimate).

    Raises ToleranceNotMet (with the best estimate attached) when max_depth
    is exhausted before the tolerance is reached.
    """
    spec = spec or QuadratureSpec()
    bits = bits or DEFAULT_PRECISION_BITS
    a, b = interval
    if not (b > a):
        if b == a:
            return BigScalar.zero(bits), BigScalar.zero(bits)
        raise DomainError("interval must be ordered")
    if spec.method == "tanh-sinh":
        return _tanh_sinh(f, a, b, spec, bits)
    return _adaptive_simpson(f, a, b, spec, bits)


def _tanh_sinh(f, a, b, spec, bits):
    # Nodes cluster doubly-exponentially at the endpoints; endpoint values
    # are never requested, so flat decay and integrable singularities both
    # work.  Level doubling halves the step in the auxiliary variable.
    half = (b - a) / 2.0
    mid = (a + b) / 2.0
    pi_2 = math.pi / 2.0

    def node(u):
        # u in (-1, 1) -> x in (a, b)
        return mid + half * u

    prev = None
    h = 1.0
    terms = {}

    def weight_and_abscissa(t):
        sh = math.sinh(t)
        ch = math.cosh(t)
        u = math.tanh(pi_2 * sh)
        w = pi_2 * ch / math.cosh(pi_2 * sh) ** 2
        return u, w

    best = None
    best_err = None
    for level in range(spec.max_depth):
        kmax = int(math.ceil(6.0 / h))
        new_ts = []
        if level == 0:
            new_ts = [k * h for k in range(-kmax, kmax + 1)]
        else:
            # only odd multiples of the new h are new points
            new_ts = [k * h for k in range(-kmax, kmax + 1) if k % 2 != 0]
        for t in new_ts:
            u, w = weight_and_abscissa(t)
            if abs(u) >= 1.0:
                continue
            x = node(u)
            if not (a < x < b):
                continue
            terms[t] = _as_big(f(x), bits) * w
        total = lse_sum(terms.values(), bits) * (h * half)
        if prev is not None:
            err = abs(total - prev)
            best, best_err = total, err
            if _tolerance_met(err, total, spec):
                return total, err
        prev = total
        h /= 2.0
    raise ToleranceNotMet("tanh-sinh did not converge", best=best, error=best_err)


def _simpson(f, a, b, fa, fm, fb, bits):
    return (fa + 4.0 * fm + fb) * ((b - a) / 6.0)


def _endpoint_value(f, x, inward, bits):
    try:
        v = f(x)
        if isinstance(v, BigScalar) or math.isfinite(v):
            return _as_big(v, bits)
    except (ZeroDivisionError, OverflowError, ValueError):
        pass
    return _as_big(f(x + inward), bits)


def _adaptive_simpson(f, a, b, spec, bits):
    nudge = (b - a) * 1e-15
    fa = _endpoint_value(f, a, nudge, bits)
    fb = _endpoint_value(f, b, -nudge, bits)
    m = 0.5 * (a + b)
    fm = _as_big(f(m), bits)
    whole = _simpson(f, a, b, fa, fm, fb, bits)

    # iterative stack: (a, b, fa, fm, fb, whole, depth)
    stack = [(a, b, fa, fm, fb, whole, 0)]
    pieces = []
    err_acc = []
    # Tolerance is split per panel relative to panel length.
    failed = False
    while stack:
        pa, pb, va, vm, vb, pw, depth = stack.pop()
        lm = 0.5 * (pa + pb)
        lmid_left = 0.5 * (pa + lm)
        lmid_right = 0.5 * (lm + pb)
        fl = _as_big(f(lmid_left), bits)
        fr = _as_big(f(lmid_right), bits)
        left = _simpson(f, pa, lm, va, fl, vm, bits)
        right = _simpson(f, lm, pb, vm, fr, vb, bits)
        err = abs(left + right - pw)
        frac = (pb - pa) / (b - a)
        panel_abs = spec.abs_tol * frac
        panel_ok = False
        if err.is_zero():
            panel_ok = True
        else:
            bound = abs(left + right) * spec.rel_tol
            if bound < panel_abs:
                bound = panel_abs
            panel_ok = err <= bound
        if panel_ok or depth >= spec.max_depth:
            if not panel_ok:
                failed = True
            pieces.append(left + right)
            err_acc.append(err / 15.0)
        else:
            stack.append((pa, lm, va, fl, vm, left, depth + 1))
            stack.append((lm, pb, vm, fr, vb, right, depth + 1))
    total = lse_sum(pieces, bits)
    err_total = lse_sum(err_acc, bits)
    if failed and not _tolerance_met(err_total, total, spec):
        raise ToleranceNotMet("adaptive bisection hit max_depth", best=total, error=err_total)
    return total, err_total


def integrate_2d(
    f: Callable,
    rectangle: Tuple[Tuple[float, float], Tuple[float, float]],
    spec: QuadratureSpec = None,
    bits: int = None,
) -> Tuple[BigScalar, BigScalar]:
    """Iterated 1-D integration over an axis rectangle ((x0,x1),(y0,y1))."""
    spec = spec or QuadratureSpec()
    bits = bits or DEFAULT_PRECISION_BITS
    (x0, x1), (y0, y1) = rectangle
    inner_spec = QuadratureSpec(
        method=spec.method,
        abs_tol=spec.abs_tol * (1.0 / max(x1 - x0, 1e-300)),
        rel_tol=max(spec.rel_tol * 0.1, 1e-14),
        max_depth=spec.max_depth,
    )
    errs = []

    def row(x):
        val, err = integrate_1d(lambda y: f(x, y), (y0, y1), inner_spec, bits)
        errs.append(err)
        return val

    outer, outer_err = integrate_1d(row, (x0, x1), spec, bits)
    inner_err = lse_sum(errs, bits) * ((x1 - x0) / max(len(errs), 1))
    return outer, outer_err + inner_err
