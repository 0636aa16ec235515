"""Smooth periodic plateau cutoffs and the derivative-paired family.

``plateau`` is the 1-periodic profile that equals 1 on [1/4, 3/4], 0 on
[0, 1/8] and [7/8, 1], and climbs with the standard exp(-1/x) smoothstep in
between.  Derivatives up to order 8 come from closed-form chain-rule tables
(Bell polynomials over the logistic ramp), never finite differences: the
ramps are flat and FD would lose them.

``paired_cutoff(k)`` is the nonnegative 1-periodic family whose derivative
pairs against the matching plateau derivative with unit integral: with
order N = N(k) it is lam * (plateau^{(N-1)} + sup|plateau^{(N-1)}|), so its
derivative is lam * plateau^{(N)} and the pairing integral equals
lam * ||plateau^{(N)}||_2^2 >= 1 by the choice of lam.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Dict, List

import numpy as np

from ..exceptions import DomainError
from .layout import PatchLayout, band_of, cell_of, top_cell_index

J_MAX = 8  # highest plateau derivative available in closed form
_RAMP_SCALE = 8.0  # ramp width 1/8 in the unit period
_W_CLIP = 700.0  # logistic argument beyond which the value/derivatives
# underflow double precision; true magnitudes there are < 1e-250


# ---- logistic ramp and its derivatives --------------------------------------


def _sigma_polys(jmax: int):
    """sigma^{(m)} as polynomial coefficient arrays in powers of sigma."""
    # sigma' = sigma - sigma^2; represent P(x) with coeff list, P[i] ~ x^i
    polys = [np.array([0.0, 1.0])]  # sigma itself
    for _ in range(jmax):
        p = polys[-1]
        dp = np.polynomial.polynomial.polyder(p)
        # dp(x) * (x - x^2)
        nxt = np.polynomial.polynomial.polymul(dp, np.array([0.0, 1.0, -1.0]))
        polys.append(nxt)
    return polys[1:]  # derivatives 1..jmax


_SIGMA_D = _sigma_polys(J_MAX)

# binomial table for the Bell recurrence
_BINOM = [[math.comb(n, k) for k in range(J_MAX + 1)] for n in range(J_MAX + 1)]


def _ramp_derivs(v: np.ndarray, jmax: int) -> List[np.ndarray]:
    """[S, S', ..., S^{(jmax)}] on the open ramp coordinate v in (0, 1).

    S(v) = sigma(w(v)) with w = 1/(1-v) - 1/v; outside |w| <= 700 the value
    saturates to exactly 0/1 with zero derivatives.
    """
    v = np.asarray(v, dtype=float)
    w = 1.0 / (1.0 - v) - 1.0 / v
    live = np.abs(w) <= _W_CLIP
    sig = np.zeros_like(v)
    sig[w > _W_CLIP] = 1.0
    wl = w[live]
    sig[live] = 1.0 / (1.0 + np.exp(-wl))

    out = [sig]
    if jmax == 0:
        return out

    # w^{(r)}(v) for r = 1..jmax on the live set
    vl = v[live]
    wd = []
    for r in range(1, jmax + 1):
        fact = math.factorial(r)
        wd.append(fact / (1.0 - vl) ** (r + 1) + (-1) ** (r + 1) * fact / vl ** (r + 1))

    # sigma^{(m)}(w) via the polynomials in sigma
    sl = sig[live]
    sig_d = [np.polynomial.polynomial.polyval(sl, p) for p in _SIGMA_D]

    # incomplete Bell B_{j,m}(w', ..., w^{(j-m+1)}) by recurrence
    bell: Dict = {(0, 0): np.ones_like(vl)}

    def B(j, m):
        if (j, m) in bell:
            return bell[(j, m)]
        if m == 0 or j < m:
            val = np.zeros_like(vl)
        else:
            val = np.zeros_like(vl)
            for i in range(1, j - m + 2):
                val = val + _BINOM[j - 1][i - 1] * wd[i - 1] * B(j - i, m - 1)
        bell[(j, m)] = val
        return val

    for j in range(1, jmax + 1):
        acc = np.zeros_like(vl)
        for m in range(1, j + 1):
            acc = acc + sig_d[m - 1] * B(j, m)
        full = np.zeros_like(v)
        full[live] = acc
        out.append(full)
    return out


def plateau(y, j: int = 0):
    """j-th derivative of the 1-periodic plateau profile at y (array ok)."""
    if j < 0 or j > J_MAX:
        raise DomainError(f"plateau derivative order must lie in [0, {J_MAX}]")
    y = np.asarray(y, dtype=float)
    frac = y - np.floor(y)
    out = np.zeros_like(frac)
    if j == 0:
        out[(frac >= 0.25) & (frac <= 0.75)] = 1.0
    up = (frac > 0.125) & (frac < 0.25)
    dn = (frac > 0.75) & (frac < 0.875)
    if np.any(up):
        vd = _ramp_derivs((frac[up] - 0.125) * _RAMP_SCALE, j)
        out[up] = vd[j] * _RAMP_SCALE**j
    if np.any(dn):
        vd = _ramp_derivs((0.875 - frac[dn]) * _RAMP_SCALE, j)
        out[dn] = vd[j] * (-_RAMP_SCALE) ** j
    if out.ndim == 0:
        return float(out)
    return out


@lru_cache(maxsize=None)
def plateau_sup(j: int) -> float:
    """C_j: sup over one period of |plateau^{(j)}| by dense ramp sampling."""
    if j == 0:
        return 1.0
    v = np.linspace(0.0, 1.0, 32769)[1:-1]
    vd = _ramp_derivs(v, j)
    return float(np.max(np.abs(vd[j]))) * _RAMP_SCALE**j


@lru_cache(maxsize=None)
def _deriv_l2sq(order: int) -> float:
    """integral over one period of (plateau^{(order)})^2 (trapezoid on the
    ramps; the integrand is flat at ramp ends so this superconverges)."""
    v = np.linspace(0.0, 1.0, 65537)
    vd = _ramp_derivs(v[1:-1], order)[order] * _RAMP_SCALE**order
    # two ramps per period, each of width 1/8, same profile up to sign
    ramp = np.zeros(65537)
    ramp[1:-1] = vd
    return 2.0 * float(np.trapz(ramp**2, dx=1.0 / 65536.0)) / _RAMP_SCALE


def cutoff_order(k: int) -> int:
    """Slowly growing derivative order N(k) = 1 + floor(lg lg (k+3))."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return 1 + int(math.floor(math.log2(math.log2(k + 3))))


@lru_cache(maxsize=None)
def pairing_scale(order: int) -> float:
    """lam = max(1, 1 / ||plateau^{(order)}||_2^2)."""
    return max(1.0, 1.0 / _deriv_l2sq(order))


def paired_cutoff(k: int, y, j: int = 0):
    """j-th derivative of the nonnegative pairing cutoff for index k."""
    n = cutoff_order(k)
    lam = pairing_scale(n)
    if j == 0:
        return lam * (plateau(y, n - 1) + plateau_sup(n - 1))
    if n - 1 + j > J_MAX:
        raise DomainError("requested derivative beyond the closed-form table")
    return lam * plateau(y, n - 1 + j)


@lru_cache(maxsize=None)
def paired_cutoff_sup(k: int, j: int) -> float:
    """C_j of the pairing cutoff for index k."""
    n = cutoff_order(k)
    lam = pairing_scale(n)
    if j == 0:
        return lam * 2.0 * plateau_sup(n - 1)
    return lam * plateau_sup(n - 1 + j)


def pairing_certificate(k: int, samples: int = 65537) -> float:
    """Value of the pairing integral for index k (must be >= 1).

    The integrand is lam * (plateau^{(N)})^2 by construction; computed by
    trapezoid over one period (flat at all ramp junctions).
    """
    n = cutoff_order(k)
    lam = pairing_scale(n)
    y = np.linspace(0.0, 1.0, samples)
    g = plateau(y, n)
    return lam * float(np.trapz(g * g, dx=1.0 / (samples - 1)))


def poincare_pair(order: int, samples: int = 65537) -> tuple:
    """(integral of plateau^2, pi^{-2 order} * integral of (plateau^{(order)})^2)."""
    y = np.linspace(0.0, 1.0, samples)
    base = plateau(y, 0)
    lhs = float(np.trapz(base * base, dx=1.0 / (samples - 1)))
    rhs = math.pi ** (-2 * order) * _deriv_l2sq(order)
    return lhs, rhs


def slow_growth_audit(k_lo: int, k_hi: int, j_max: int = 3) -> List[dict]:
    """Finite-range audit that exp(-peak_depth/2) * C_j(paired cutoff)
    decays along the implemented k-range for each derivative order.

    Returns one row per j with the sequence max and endpoint values (logs).
    """
    rows = []
    for j in range(j_max + 1):
        lns = []
        for k in range(k_lo, k_hi + 1):
            depth = (math.pi * (k + 0.5)) ** 2
            lns.append(-0.5 * depth + math.log(paired_cutoff_sup(k, j)))
        rows.append(
            {
                "order": j,
                "ln_first": lns[0],
                "ln_last": lns[-1],
                "ln_max": max(lns),
                "monotone_decreasing": all(b < a for a, b in zip(lns, lns[1:])),
            }
        )
    return rows


# ---- the collar cell cutoff ------------------------------------------------


class CutoffFamily:
    """Bundles the plateau profile, the pairing family, and the collar cell
    cutoff for one patch layout."""

    def __init__(self, layout: PatchLayout):
        self.layout = layout

    def cell_value(self, x_n: float, y_n: float, j_transverse: int = 0) -> float:
        """Cell cutoff at local coordinates: plateau(k^{1/2} y_n) on interior
        cells, identically zero on each band's top cell.

        ``j_transverse``: order of the transverse derivative (chain factor
        k^{j/2} included)."""
        if x_n <= 0:
            raise DomainError("cell cutoff needs a positive oscillation coordinate")
        if x_n >= 1.0 / (math.pi * self.layout.k_min):
            return 0.0
        k = band_of(x_n)
        if k < self.layout.k_min:
            return 0.0
        ibar = top_cell_index(self.layout, k)
        if y_n < 0:
            return 0.0
        i = cell_of(self.layout, k, y_n)
        if i >= ibar:
            return 0.0
        root_k = math.sqrt(k)
        return plateau(root_k * y_n, j_transverse) * root_k**j_transverse

    def is_plateau(self, x_n: float, y_n: float) -> bool:
        """True when the cell cutoff is exactly 1 at these coordinates."""
        if x_n <= 0 or x_n >= 1.0 / (math.pi * self.layout.k_min):
            return False
        k = band_of(x_n)
        if k < self.layout.k_min:
            return False
        ibar = top_cell_index(self.layout, k)
        i = cell_of(self.layout, k, y_n)
        if not (0 <= i < ibar):
            return False
        frac = math.sqrt(k) * y_n - i
        return 0.25 <= frac <= 0.75
