"""The glued coefficient field (a, b, c, f) on R^5 with region dispatch.

Inside each inner square the field is a scaled bump in f alone; in the four
collar rectangles f = K_n + g_n splits into the oscillator part and the
gradient-coupled part, with a = a_n(x,y) u u_y in the vertical collars and
c = c_n(x,y) u u_x in the horizontal ones (roles of x and y swapped by
calling the same code on swapped arguments, so the symmetry is exact).
Everything else (dead-zone corners, seams, the complement of the outer
squares) evaluates to exact zero.  b vanishes identically.

Dispatch happens on exact rationals (floats are dyadic), so region
boundaries are decided exactly and repeated runs are byte-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import gmpy2
import numpy as np

from ..exceptions import DomainError, StateError, ToleranceNotMet
from ..numerics.bigscalar import BigScalar, DEFAULT_PRECISION_BITS, _ctx, lse_sum
from ..numerics.quadrature import QuadratureSpec, integrate_1d
from .cutoffs import (
    CutoffFamily,
    cutoff_order,
    paired_cutoff,
    paired_cutoff_sup,
    plateau_sup,
)
from .layout import PatchLayout, band_of, oscillation_band, patch_layout
from .oscillator import OscillatorProfile


# ---- bump profile -----------------------------------------------------------


def bump_ln(x: float, y: float) -> Optional[float]:
    """ln of the unit bump exp(-1/(1-x^2) - 1/(1-y^2)) on the open square,
    None outside (exact zero)."""
    if abs(x) >= 1.0 or abs(y) >= 1.0:
        return None
    return -1.0 / (1.0 - x * x) - 1.0 / (1.0 - y * y)


def bump(x: float, y: float) -> float:
    ln = bump_ln(x, y)
    if ln is None or ln < -700.0:
        return 0.0
    return math.exp(ln)


# ---- minimal admissible schedule --------------------------------------------


class FloorSchedule:
    """Smallest power-of-two schedule admissible on cutoff norms alone:
    tau_k = 2^j >= max(k, k^4 C_{N(k)}(plateau) C_0(paired cutoff)).

    The duel replaces this with its measured schedule; the field only needs
    some fixed admissible schedule to make the gradient-coupled part of f a
    definite function.
    """

    name = "floor"

    @lru_cache(maxsize=None)
    def exponent(self, k: int) -> int:
        n = cutoff_order(k)
        need = max(
            float(k),
            float(k) ** 4 * plateau_sup(n) * paired_cutoff_sup(k, 0),
        )
        j = max(1, int(math.ceil(math.log2(need))))
        # nondecreasing in k by construction of the pieces, but enforce
        if k > 1:
            j = max(j, self.exponent(k - 1))
        return j

    def order(self, k: int) -> int:
        return cutoff_order(k)

    def tau_ln(self, k: int):
        return self.exponent(k) * math.log(2.0)

    def tau_big(self, k: int, bits: int = None) -> BigScalar:
        return BigScalar.pow2(self.exponent(k), bits)


def phase_fraction(tau_exponent: int, s_base: float, shift: BigScalar) -> float:
    """frac(2^j * (s_base + shift)) in [0, 1).

    ``s_base`` is a float (exact dyadic), so its contribution is an exact
    integer for j >= 1074 and an exact fraction otherwise; ``shift`` is a
    log-domain value canonicalized to j+64 bits.  The choice of dyadic
    representative for the shift is deterministic, which is all a fixed
    admissible field requires.
    """
    j = int(tau_exponent)
    total = Fraction(0)
    q = Fraction(s_base)
    total += q * (Fraction(2) ** j)
    if not shift.is_zero():
        bits = j + 64
        ctx = _ctx(max(bits, 128))
        ln2 = ctx.log(gmpy2.mpfr(2, max(bits, 128)))
        t = ctx.exp(ctx.add(gmpy2.mpfr(shift.ln_mag, max(bits, 128)), ctx.mul(gmpy2.mpfr(j), ln2)))
        t = ctx.mul(t, gmpy2.mpfr(shift.sign))
        fr = ctx.sub(t, gmpy2.floor(t))
        total += Fraction(float(fr))
    frac = total - math.floor(total)
    return float(frac)


# ---- the field --------------------------------------------------------------


@dataclass(frozen=True)
class FieldValue:
    a: BigScalar
    b: BigScalar
    c: BigScalar
    f: BigScalar
    region: str
    n: Optional[int] = None

    @property
    def sign_f(self) -> int:
        return self.f.sign


class CoefficientField:
    def __init__(
        self,
        n_max: int = 32,
        sign_mode: str = "alternating",
        schedule=None,
        bits: int = None,
        flatness_order: int = 3,
    ):
        if sign_mode not in ("alternating", "negative", "positive"):
            raise DomainError(f"unknown sign_mode {sign_mode!r}")
        self.bits = bits or DEFAULT_PRECISION_BITS
        self.n_max = n_max
        self.sign_mode = sign_mode
        self.flatness_order = flatness_order
        self.profile = OscillatorProfile(self.bits)
        self.layouts: Dict[int, PatchLayout] = {n: patch_layout(n) for n in range(1, n_max + 1)}
        self.cutoffs: Dict[int, CutoffFamily] = {n: CutoffFamily(self.layouts[n]) for n in self.layouts}
        self._schedule = schedule
        self._antideriv_cache: Dict = {}
        self.gamma: Dict[int, float] = gamma_schedule(self, n_max, flatness_order)

    # -- schedule --------------------------------------------------------

    @property
    def schedule(self):
        if self._schedule is None:
            raise StateError("no oscillation schedule attached to the field")
        return self._schedule

    def with_schedule(self, schedule) -> "CoefficientField":
        clone = object.__new__(CoefficientField)
        clone.__dict__.update(self.__dict__)
        clone._schedule = schedule
        return clone

    def bump_sign(self, n: int) -> int:
        if self.sign_mode == "alternating":
            return 1 if n % 2 == 1 else -1
        return -1 if self.sign_mode == "negative" else 1

    # -- region dispatch ---------------------------------------------------

    def classify(self, x: float, y: float) -> Tuple[str, Optional[int]]:
        """Region tag for a point, decided on exact rationals."""
        fx, fy = Fraction(x), Fraction(y)
        if fx <= 0:
            return ("exterior", None)
        inv = 1.0 / x if x > 0 else math.inf
        candidates = [int(math.floor(inv)) + d for d in (-1, 0, 1)]
        for n in candidates:
            if n < 1:
                continue
            if n > self.n_max:
                continue
            L = self.layouts[n]
            x0, x1, y0, y1 = L.outer
            if not (x0 <= fx <= x1 and y0 <= fy <= y1):
                continue
            return self._classify_in_patch(L, fx, fy)
        if 0 < fx and fx < self.layouts[self.n_max].outer[0]:
            # accumulating patches beyond the configured horizon
            return ("deep", None)
        return ("exterior", None)

    @staticmethod
    def _strictly_inside(rect, fx, fy) -> bool:
        x0, x1, y0, y1 = rect
        return x0 < fx < x1 and y0 < fy < y1

    def _classify_in_patch(self, L, fx, fy):
        if self._strictly_inside(L.inner, fx, fy):
            return (f"X{L.n}", L.n)
        if self._strictly_inside(L.collar_right, fx, fy):
            return (f"+V{L.n}", L.n)
        if self._strictly_inside(L.collar_left, fx, fy):
            return (f"-V{L.n}", L.n)
        if self._strictly_inside(L.collar_top, fx, fy):
            return (f"+H{L.n}", L.n)
        if self._strictly_inside(L.collar_bottom, fx, fy):
            return (f"-H{L.n}", L.n)
        if self._strictly_inside(L.outer, fx, fy):
            x0i, x1i, y0i, y1i = L.inner
            if fx == x0i or fx == x1i or fy == y0i or fy == y1i:
                return (f"seam{L.n}", L.n)
            return (f"frame{L.n}", L.n)
        return (f"seam{L.n}", L.n)

    # -- component evaluators ----------------------------------------------

    def _gamma_big(self, n: int) -> BigScalar:
        return BigScalar.from_float(self.gamma[n], self.bits)

    def eval_Kn(self, n: int, osc: float, trans: float) -> BigScalar:
        """K_n at collar-local coordinates (oscillation, transverse height).

        Nonpositive; exactly zero off the admissible bands or on top cells.
        """
        L = self.layouts[n]
        if not (0 < osc < float(L.collar_depth)):
            raise DomainError("point outside the collar in local coordinates")
        psi = self.cutoffs[n].cell_value(osc, trans)
        if psi == 0.0:
            return BigScalar.zero(self.bits)
        kval = self.profile.value(osc, first_band=L.k_min)
        if kval.is_zero():
            return BigScalar.zero(self.bits)
        return -(self._gamma_big(n) * kval * psi)

    def eval_an(self, n: int, osc: float, trans: float) -> BigScalar:
        """a_n at collar-local coordinates: 2 * (1/sin^4)'(osc) *
        sqrt(gamma_n K) * cell cutoff.  Finite everywhere: the flat root
        kills the reciprocal-sine blowup."""
        L = self.layouts[n]
        if not (0 < osc < float(L.collar_depth)):
            raise DomainError("point outside the collar in local coordinates")
        psi = self.cutoffs[n].cell_value(osc, trans)
        if psi == 0.0:
            return BigScalar.zero(self.bits)
        root = (self._gamma_big(n) * self.profile.value(osc, first_band=L.k_min)).sqrt()
        if root.is_zero():
            return BigScalar.zero(self.bits)
        slope = self.profile.inv_sin4_d1(osc)
        return 2.0 * BigScalar.from_float(slope, self.bits) * root * psi

    def antideriv_sqrtK(self, n: int, osc: float, rel_tol: float = 1e-9) -> BigScalar:
        """Integral of sqrt(gamma_n K) from 0 to osc (local coordinate).

        Monotone nondecreasing in osc; full-band panels are cached per
        (n, tolerance); the flat tail below the working scale is truncated.
        """
        L = self.layouts[n]
        if osc <= 0:
            return BigScalar.zero(self.bits)
        top = 1.0 / (math.pi * L.k_min)
        if osc >= top:
            osc = top  # integrand vanishes beyond the first admissible band
        kx = band_of(osc) if osc < top else L.k_min
        kx = max(kx, L.k_min)
        spec = QuadratureSpec(method="tanh-sinh", rel_tol=rel_tol, max_depth=40)
        pieces: List[BigScalar] = []
        # partial band containing osc
        lo = 1.0 / (math.pi * (kx + 1))
        if osc > lo:
            val, _ = integrate_1d(
                lambda t: self.profile.sqrt_value(t, first_band=L.k_min),
                (lo, min(osc, 1.0 / (math.pi * kx))),
                spec,
                self.bits,
            )
            pieces.append(val)
        # full bands below, cached; stop once the tail is invisible
        floor_ln = None
        for k in range(kx + 1, kx + 4000):
            key = (n, k, rel_tol)
            cached = self._antideriv_cache.get(key)
            if cached is None:
                a, b = oscillation_band(k)
                cached, _ = integrate_1d(
                    lambda t: self.profile.sqrt_value(t, first_band=L.k_min),
                    (a, b),
                    spec,
                    self.bits,
                )
                self._antideriv_cache[key] = cached
            pieces.append(cached)
            cur = lse_sum(pieces, self.bits)
            if not cur.is_zero():
                if float(cached.ln_mag) < float(cur.ln_mag) - (self.bits + 64) * math.log(2.0):
                    break
        total = lse_sum(pieces, self.bits)
        return total * self._gamma_big(n).sqrt()

    def eval_gn(
        self,
        n: int,
        osc: float,
        trans: float,
        grad_slot: float,
        phase: Optional[float] = None,
    ) -> BigScalar:
        """g_n at collar-local coordinates with the relevant gradient slot.

        ``phase``: optional precomputed fractional part of tau * s; supplied
        by the pairing-integral path where the alignment is exact.  Without
        it the phase is canonicalized through ``phase_fraction``.
        """
        sched = self.schedule  # StateError when absent
        L = self.layouts[n]
        kn_val = self.eval_Kn(n, osc, trans)
        if kn_val.is_zero():
            return BigScalar.zero(self.bits)
        k = band_of(osc)
        N = sched.order(k)
        j = sched.exponent(k)
        if phase is None:
            shift = self.antideriv_sqrtK(n, osc)
            phase = phase_fraction(j, grad_slot, shift)
        cut = paired_cutoff(k, phase)
        ln_taupow = -N * j * math.log(2.0)
        return kn_val * BigScalar.from_ln(1, ln_taupow, self.bits) * cut

    # -- the full field ------------------------------------------------------

    def eval(self, x, y, u: float, p: float, q: float) -> FieldValue:
        """Field at (x, y, u, p, q); x and y may be floats or Fractions.

        Local collar coordinates are computed in exact rational arithmetic
        before the single rounding to float, so evaluating the horizontal
        collars through the swapped code path reproduces the vertical ones
        bit for bit.
        """
        fx, fy = Fraction(x), Fraction(y)
        region, n = self.classify(fx, fy)
        zero = BigScalar.zero(self.bits)
        if n is None or region.startswith(("seam", "frame", "exterior", "deep")):
            return FieldValue(zero, zero, zero, zero, region, n)
        L = self.layouts[n]
        if region.startswith("X"):
            scale = 4 * n * (n + 1)
            ln = bump_ln(float(scale * (fx - L.center[0])), float(scale * (fy - L.center[1])))
            if ln is None:
                f = zero
            else:
                f = BigScalar.from_ln(self.bump_sign(n), ln, self.bits) * self._gamma_big(n)
            return FieldValue(zero, zero, zero, f, region, n)
        # collars: map to local (oscillation, transverse) coordinates and
        # route the horizontal collars through the same code with roles of
        # x and y (and p and q) swapped.
        if region.startswith("+V"):
            osc = float(fx - L.wall_offset_x)
            trans = float(fy + L.half_inner)
            return self._collar_value(n, osc, trans, u, p, q, region, vertical=True)
        if region.startswith("-V"):
            osc = float((L.center[0] - L.half_inner) - fx)
            trans = float(fy + L.half_inner)
            return self._collar_value(n, osc, trans, u, p, q, region, vertical=True)
        if region.startswith("+H"):
            osc = float(fy - (L.center[1] + L.half_inner))
            trans = float(fx - (L.center[0] - L.half_inner))
            return self._collar_value(n, osc, trans, u, q, p, region, vertical=False)
        if region.startswith("-H"):
            osc = float((L.center[1] - L.half_inner) - fy)
            trans = float(fx - (L.center[0] - L.half_inner))
            return self._collar_value(n, osc, trans, u, q, p, region, vertical=False)
        raise DomainError(f"unhandled region {region}")  # pragma: no cover

    def _collar_value(self, n, osc, trans, u, p_slot, q_slot, region, vertical):
        """Collar field with the oscillation running in ``osc``; for the
        horizontal collars the caller already swapped the gradient slots,
        so ``q_slot`` is always the slot the collar couples to."""
        zero = BigScalar.zero(self.bits)
        if not (0 < osc < float(self.layouts[n].collar_depth)):
            return FieldValue(zero, zero, zero, zero, region, n)
        kn_val = self.eval_Kn(n, osc, trans)
        coupling = self.eval_an(n, osc, trans) * u * q_slot
        if self._schedule is not None and not kn_val.is_zero():
            g = self.eval_gn(n, osc, trans, q_slot)
        else:
            g = zero
        f = kn_val + g
        if vertical:
            return FieldValue(coupling, zero, zero, f, region, n)
        return FieldValue(zero, zero, coupling, f, region, n)


def build_field(n_max: int = 32, sign_mode: str = "alternating", schedule=None, bits: int = None) -> CoefficientField:
    if schedule is None:
        schedule = FloorSchedule()
    return CoefficientField(n_max=n_max, sign_mode=sign_mode, schedule=schedule, bits=bits)


# ---- decay schedule ----------------------------------------------------------


@lru_cache(maxsize=None)
def _bump_deriv_sup(jx: int, jy: int) -> float:
    """Sampled sup of |d^{jx}_x d^{jy}_y bump| over the unit square."""
    from ..numerics.fd import FDScheme, fd_derivative

    grid = np.linspace(-0.97, 0.97, 39)
    best = 0.0
    for xv in grid:
        for yv in grid:
            if jx == 0 and jy == 0:
                val = bump(xv, yv)
            else:
                val, _ = fd_derivative(
                    bump, (xv, yv), (jx, jy), FDScheme(order=4, h=2e-3, richardson_levels=1)
                )
            best = max(best, abs(val))
    return best


def _collar_block_sup(field: CoefficientField, n: int, j: int) -> float:
    """Sampled sup over the collar of unit-weight oscillator blocks at
    derivative order j: the K-block, the coupling block, and the
    gradient-coupled block (via closed-form cutoff norms with the floor
    schedule; exponents are nonpositive for j <= min(n, 3), so any larger
    admissible schedule only shrinks them)."""
    L = field.layouts[n]
    prof = field.profile
    floor = FloorSchedule()
    depth = float(L.collar_depth)
    best = 0.0
    for k in range(L.k_min, L.k_min + 6):
        a, b = oscillation_band(k)
        if a >= depth:
            continue
        N = cutoff_order(k)
        jexp = floor.exponent(k)
        for frac in (0.2, 0.5, 0.8):
            x = a + (b - a) * frac
            # transverse plateau center of cell 0 when it exists
            y_n = 0.5 / math.sqrt(k)
            kb = prof.value(x, first_band=L.k_min)
            if kb.is_zero():
                continue
            ln_k = float(kb.ln_mag)
            # oscillation-direction log-derivative scale of the K-block
            slope = abs(float(prof.inv_sin2_d1(x)))
            k_block = math.exp(min(ln_k + j * math.log(max(slope, 1.0)), 700.0)) if ln_k > -700 else 0.0
            root_block = (
                math.exp(min(0.5 * ln_k + math.log(max(abs(float(prof.inv_sin4_d1(x))), 1.0)) + j * math.log(max(slope, 1.0)), 700.0))
                if ln_k > -1400
                else 0.0
            )
            g_block = 0.0
            for jq in range(0, j + 1):
                expo = min(jq - N, 0) * jexp * math.log(2.0)
                ln_term = ln_k + expo + math.log(paired_cutoff_sup(k, jq))
                if ln_term > -700:
                    g_block = max(g_block, math.exp(min(ln_term, 700.0)) * max(slope, 1.0) ** (j - jq))
            best = max(best, k_block, root_block, g_block)
    return best


def gamma_schedule(field: CoefficientField, n_max: int, order_cap: int = 3) -> Dict[int, float]:
    """Constructive decay weights: gamma_n = min(1/n!, 1/(n (1 + M_n)),
    previous), where M_n is the sampled sup over derivative orders
    j <= min(n, order_cap) of the unit-weight building blocks on patch n.
    This pins the sampled C^j norms of the glued field below 1/n."""
    out: Dict[int, float] = {}
    prev = 1.0
    for n in range(1, n_max + 1):
        scale = float(4 * n * (n + 1))
        m_n = 0.0
        for j in range(0, min(n, order_cap) + 1):
            # bump block with the patch scaling
            blk = 0.0
            for jx in range(0, j + 1):
                blk = max(blk, _bump_deriv_sup(jx, j - jx))
            m_n = max(m_n, scale**j * blk)
            m_n = max(m_n, _collar_block_sup(field, n, j))
        g = min(1.0 / math.factorial(n), 1.0 / (n * (1.0 + m_n)), prev)
        out[n] = g
        prev = g
    return out


# ---- flatness report ----------------------------------------------------------


def flatness_report(
    field: CoefficientField,
    n: int,
    order: int = 3,
    h: float = 1e-3,
    samples: int = 200,
    slots: Tuple[float, float, float] = (0.3, 0.2, 0.1),
) -> List[dict]:
    """Max |d^j f| along the patch seams, per seam and derivative order.

    One-sided stencils stay inside the flat side where a seam borders the
    bump support; across the outer boundary the stencil is centered (the
    field is defined on both sides).
    """
    if order > 5:
        raise DomainError("flatness orders above 5 are not supported")
    from ..numerics.fd import FDScheme, fd_derivative

    L = field.layouts[n]
    u0, p0, q0 = slots
    rows = []

    def f_scalar(x, y):
        return field.eval(x, y, u0, p0, q0).f.to_float()

    def max_over(points, j, direction, one_sided_sign=None):
        best = 0.0
        for (px, py) in points:
            if direction == "x":
                g = lambda t: f_scalar(px + t, py)
            else:
                g = lambda t: f_scalar(px, py + t)
            if one_sided_sign is not None:
                # shift so the whole stencil sits on one side of the seam
                shift = one_sided_sign * (j + 2) * h
                gg = lambda t: g(t + shift)
            else:
                gg = g
            val, _ = fd_derivative(gg, 0.0, (j,), FDScheme(order=2, h=h, richardson_levels=0))
            best = max(best, abs(val))
        return best

    ts = np.linspace(0.05, 0.95, samples)
    x0o, x1o, y0o, y1o = (float(v) for v in L.outer)
    x0i, x1i, y0i, y1i = (float(v) for v in L.inner)

    # inner-square walls: one-sided from inside (the bump side)
    wall_pts = {
        "inner-right": [(x1i, y0i + t * (y1i - y0i)) for t in ts],
        "inner-left": [(x0i, y0i + t * (y1i - y0i)) for t in ts],
        "inner-top": [(x0i + t * (x1i - x0i), y1i) for t in ts],
        "inner-bottom": [(x0i + t * (x1i - x0i), y0i) for t in ts],
    }
    for name, pts in wall_pts.items():
        direction = "x" if "right" in name or "left" in name else "y"
        sign = -1 if name in ("inner-right", "inner-top") else 1
        for j in range(0, order + 1):
            rows.append(
                {
                    "seam": name,
                    "order": j,
                    "max_abs": max_over(pts, j, direction, one_sided_sign=sign),
                }
            )

    # outer boundary: centered stencils across the seam
    outer_pts = {
        "outer-right": [(x1o, y0o + t * (y1o - y0o)) for t in ts],
        "outer-top": [(x0o + t * (x1o - x0o), y1o) for t in ts],
    }
    for name, pts in outer_pts.items():
        direction = "x" if "right" in name else "y"
        for j in range(0, order + 1):
            rows.append({"seam": name, "order": j, "max_abs": max_over(pts, j, direction)})

    # collar lateral seams (between collars and dead-zone corners)
    lat_pts = {
        "collar-lateral": [
            (x1i + t * (x1o - x1i), y1i) for t in ts
        ]
    }
    for name, pts in lat_pts.items():
        for j in range(0, order + 1):
            rows.append({"seam": name, "order": j, "max_abs": max_over(pts, j, "y")})
    return rows
