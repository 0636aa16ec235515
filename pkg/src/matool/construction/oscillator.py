"""The flat oscillator profile and its companion reciprocal-sine powers.

On each band (1/((k+1)pi), 1/(k pi)) the profile equals
``exp(-m_k^{-2} - 1/sin^2(1/x))`` where ``m_k = 1/(k pi + pi/2)`` is the
unique zero of ``cos(1/x)`` in the band; it vanishes to infinite order at
band boundaries and is identically zero past the first admissible band of a
patch.  All logs are computed in extended precision so band maxima like
``exp(-(24.5 pi)^2)`` keep full relative accuracy.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import gmpy2

from ..exceptions import DomainError
from ..numerics.bigscalar import BigScalar, DEFAULT_PRECISION_BITS, _ctx
from .layout import PatchLayout, band_of, oscillation_band

# floats within this many ulps of a multiple of pi (in phase) are treated as
# band boundaries, where the profile is exactly zero by definition
_BOUNDARY_ULPS = 8


class OscillatorProfile:
    def __init__(self, bits: int = DEFAULT_PRECISION_BITS):
        self.bits = bits
        self._ctx = _ctx(bits)
        self._pi = gmpy2.const_pi(bits)
        self._peak_cache = {}

    # ---- band bookkeeping ----------------------------------------------

    def band(self, k: int) -> Tuple[float, float]:
        return oscillation_band(k)

    def peak(self, k: int) -> float:
        """m_k: the cosine zero in band k, where the profile peaks."""
        return 1.0 / (math.pi * (k + 0.5))

    def peak_mpfr(self, k: int):
        v = self._peak_cache.get(k)
        if v is None:
            v = self._ctx.div(gmpy2.mpfr(1, self.bits), self._ctx.mul(self._pi, gmpy2.mpfr(k + 0.5)))
            self._peak_cache[k] = v
        return v

    def peak_depth(self, k: int):
        """m_k^{-2} = ((k + 1/2) pi)^2 as mpfr."""
        t = self._ctx.mul(self._pi, gmpy2.mpfr(k, self.bits) + 0.5)
        return self._ctx.mul(t, t)

    def _phase(self, x: float):
        """theta = 1/x as mpfr (x is a dyadic rational, so this is exact
        to working precision)."""
        return self._ctx.div(gmpy2.mpfr(1, self.bits), gmpy2.mpfr(x, self.bits))

    def is_band_boundary(self, x: float) -> bool:
        if x <= 0:
            raise DomainError("oscillation coordinate must be positive")
        theta = 1.0 / x
        j = round(theta / math.pi)
        if j == 0:
            return False
        return abs(theta - j * math.pi) <= _BOUNDARY_ULPS * math.ulp(theta)

    # ---- trig helpers in extended precision ------------------------------

    def _csc2_cot(self, x: float):
        theta = self._phase(x)
        s = self._ctx.sin(theta)
        c = self._ctx.cos(theta)
        if s == 0:
            raise DomainError("phase hit a multiple of pi exactly")
        csc2 = self._ctx.div(gmpy2.mpfr(1, self.bits), self._ctx.mul(s, s))
        cot = self._ctx.div(c, s)
        return theta, csc2, cot

    def inv_sin2(self, x: float):
        """1/sin^2(1/x) as mpfr."""
        _, csc2, _ = self._csc2_cot(x)
        return csc2

    def inv_sin4(self, x: float):
        _, csc2, _ = self._csc2_cot(x)
        return self._ctx.mul(csc2, csc2)

    def inv_sin2_d1(self, x: float):
        """d/dx of 1/sin^2(1/x)."""
        th, csc2, cot = self._csc2_cot(x)
        return 2 * th * th * csc2 * cot

    def inv_sin2_d2(self, x: float):
        th, csc2, cot = self._csc2_cot(x)
        th2 = th * th
        return -4 * th2 * th * csc2 * cot + 2 * th2 * th2 * (2 * csc2 * cot * cot + csc2 * csc2)

    def inv_sin4_d1(self, x: float):
        th, csc2, cot = self._csc2_cot(x)
        return 4 * th * th * csc2 * csc2 * cot

    def inv_sin4_d2(self, x: float):
        th, csc2, cot = self._csc2_cot(x)
        th2 = th * th
        csc4 = csc2 * csc2
        return -8 * th2 * th * csc4 * cot + 4 * th2 * th2 * (4 * csc4 * cot * cot + csc4 * csc2)

    # ---- the profile ------------------------------------------------------

    def ln_value(self, x: float, n_first_band: Optional[int] = None):
        """ln of the profile at x, or None where the profile is exactly zero.

        ``n_first_band``: when given, bands below that index are cut off
        (the patch truncation); when None the pure profile on every band.
        """
        if x <= 0:
            raise DomainError("oscillation coordinate must be positive")
        if self.is_band_boundary(x):
            return None
        k = band_of(x)
        if n_first_band is not None and k < n_first_band:
            return None
        return self._ctx.sub(-self.peak_depth(k), self.inv_sin2(x))

    def value(self, x: float, first_band: Optional[int] = None) -> BigScalar:
        ln = self.ln_value(x, first_band)
        if ln is None:
            return BigScalar.zero(self.bits)
        return BigScalar.from_ln(1, ln, self.bits)

    def sqrt_value(self, x: float, first_band: Optional[int] = None) -> BigScalar:
        ln = self.ln_value(x, first_band)
        if ln is None:
            return BigScalar.zero(self.bits)
        return BigScalar.from_ln(1, self._ctx.div(ln, gmpy2.mpfr(2)), self.bits)


def eval_K(profile: OscillatorProfile, x_n: float, layout: Optional[PatchLayout] = None) -> BigScalar:
    """Profile value in log-domain; with a layout the patch truncation
    applies (zero on and beyond the first admissible band boundary)."""
    if layout is None:
        return profile.value(x_n)
    if x_n <= 0:
        raise DomainError("oscillation coordinate must be positive")
    k_min = layout.k_min
    # zero at or past the inner edge of the first admissible band
    if x_n >= 1.0 / (math.pi * k_min) or profile.is_band_boundary(x_n):
        return BigScalar.zero(profile.bits)
    return profile.value(x_n, first_band=k_min)
