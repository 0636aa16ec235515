"""Signed log-domain extended-precision scalars.

A ``BigScalar`` stores a number as ``sign * exp(ln_mag)`` with ``ln_mag``
held as a gmpy2 ``mpfr`` at a configurable working precision.  This survives
magnitudes such as ``exp(-k**4)`` that underflow any fixed-width float while
keeping a bounded precision cost: relative accuracy of the represented value
equals the absolute accuracy of ``ln_mag``.

Addition and subtraction are computed with the log-sum-exp identity anchored
at the larger ``ln_mag``; exact cancellation of equal magnitudes with
opposite signs produces the exact zero (``sign == 0``).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import gmpy2

from ..exceptions import DomainError

DEFAULT_PRECISION_BITS = 256

# Contexts are cached per working precision; gmpy2 context methods return
# results rounded to the context precision.
_CTX_CACHE: dict = {}


def _ctx(bits: int):
    ctx = _CTX_CACHE.get(bits)
    if ctx is None:
        ctx = gmpy2.context(precision=bits)
        _CTX_CACHE[bits] = ctx
    return ctx


def set_default_precision(bits: int) -> None:
    """Set the package-wide working precision.

    Installs a matching global gmpy2 context so bare mpfr operator
    arithmetic elsewhere in the package runs at (at least) this precision.
    """
    global DEFAULT_PRECISION_BITS
    if bits < 64 or bits > 65536:
        raise DomainError("precision_bits must lie in [64, 65536]")
    DEFAULT_PRECISION_BITS = int(bits)
    gmpy2.set_context(gmpy2.context(precision=int(bits) + 16))


# bare-operator arithmetic anywhere in the package runs at working precision
gmpy2.set_context(gmpy2.context(precision=DEFAULT_PRECISION_BITS + 16))


Number = Union[int, float, Fraction, "BigScalar"]


class BigScalar:
    __slots__ = ("sign", "ln_mag", "precision_bits")

    def __init__(self, sign: int, ln_mag, precision_bits: int = None):
        if precision_bits is None:
            precision_bits = DEFAULT_PRECISION_BITS
        if sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or +1, got {sign!r}")
        object.__setattr__(self, "sign", sign)
        if sign == 0:
            object.__setattr__(self, "ln_mag", gmpy2.mpfr("-inf", precision_bits))
        else:
            object.__setattr__(self, "ln_mag", gmpy2.mpfr(ln_mag, precision_bits))
        object.__setattr__(self, "precision_bits", precision_bits)

    def __setattr__(self, *_):
        raise AttributeError("BigScalar is immutable")

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, bits: int = None) -> "BigScalar":
        bits = bits or DEFAULT_PRECISION_BITS
        return cls(0, 0, bits)

    @classmethod
    def one(cls, bits: int = None) -> "BigScalar":
        bits = bits or DEFAULT_PRECISION_BITS
        return cls(1, 0, bits)

    @classmethod
    def from_float(cls, x, bits: int = None) -> "BigScalar":
        bits = bits or DEFAULT_PRECISION_BITS
        """Encode a float/int/Fraction exactly (the input is converted to
        mpfr at the working precision before taking the log)."""
        if isinstance(x, BigScalar):
            return x
        if isinstance(x, type(gmpy2.mpfr(0))):
            if x == 0:
                return cls.zero(bits)
            if not gmpy2.is_finite(x):
                raise DomainError(f"cannot encode {x!r}")
            s = 1 if x > 0 else -1
            return cls(s, _ctx(bits).log(abs(x)), bits)
        if isinstance(x, Fraction):
            if x == 0:
                return cls.zero(bits)
            s = 1 if x > 0 else -1
            ctx = _ctx(bits + 8)
            ln = ctx.log(gmpy2.mpfr(x.numerator * s, bits + 8)) - ctx.log(
                gmpy2.mpfr(x.denominator, bits + 8)
            )
            return cls(s, gmpy2.mpfr(ln, bits), bits)
        if x == 0:
            return cls.zero(bits)
        if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
            raise DomainError(f"cannot encode {x!r}")
        s = 1 if x > 0 else -1
        ctx = _ctx(bits + 8)
        ln = ctx.log(gmpy2.mpfr(abs(x) if isinstance(x, float) else abs(int(x)), bits + 8))
        return cls(s, gmpy2.mpfr(ln, bits), bits)

    @classmethod
    def from_ln(cls, sign: int, ln_mag, bits: int = None) -> "BigScalar":
        bits = bits or DEFAULT_PRECISION_BITS
        """Build directly from a known natural log of the magnitude."""
        if sign == 0:
            return cls.zero(bits)
        return cls(sign, ln_mag, bits)

    @classmethod
    def exp_of(cls, exponent, bits: int = None) -> "BigScalar":
        bits = bits or DEFAULT_PRECISION_BITS
        """exp(exponent) as a positive BigScalar; exponent may be huge."""
        return cls(1, exponent, bits)

    @classmethod
    def pow2(cls, j: int, bits: int = None) -> "BigScalar":
        bits = bits or DEFAULT_PRECISION_BITS
        """2**j for (possibly very large) integer j."""
        ctx = _ctx(bits)
        return cls(1, ctx.mul(gmpy2.mpfr(j, bits), ctx.log(gmpy2.mpfr(2, bits))), bits)

    # ---- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.sign == 0

    def __bool__(self) -> bool:
        return self.sign != 0

    def to_float(self) -> float:
        """Nearest double; overflows to +-inf, underflows to 0."""
        if self.sign == 0:
            return 0.0
        if self.ln_mag > 710:
            return math.inf * self.sign
        if self.ln_mag < -745:
            return 0.0
        return self.sign * math.exp(float(self.ln_mag))

    def ln_abs(self):
        """Natural log of |x| as mpfr (-inf for the exact zero)."""
        return self.ln_mag

    def ln_float(self) -> float:
        return float(self.ln_mag)

    # ---- arithmetic ----------------------------------------------------

    def _coerce(self, other: Number) -> "BigScalar":
        if isinstance(other, BigScalar):
            return other
        return BigScalar.from_float(other, self.precision_bits)

    def __neg__(self) -> "BigScalar":
        return BigScalar(-self.sign, self.ln_mag, self.precision_bits)

    def __abs__(self) -> "BigScalar":
        return BigScalar(abs(self.sign), self.ln_mag, self.precision_bits)

    def __add__(self, other: Number) -> "BigScalar":
        other = self._coerce(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        bits = max(self.precision_bits, other.precision_bits)
        ctx = _ctx(bits)
        if self.ln_mag >= other.ln_mag:
            hi, lo = self, other
        else:
            hi, lo = other, self
        d = ctx.sub(lo.ln_mag, hi.ln_mag)  # <= 0
        if hi.sign == lo.sign:
            ln = ctx.add(hi.ln_mag, ctx.log1p(ctx.exp(d)))
            return BigScalar(hi.sign, ln, bits)
        # opposite signs: |hi| - |lo|
        if d == 0:
            return BigScalar.zero(bits)
        t = ctx.exp(d)
        ln = ctx.add(hi.ln_mag, ctx.log1p(-t))
        if gmpy2.is_infinite(ln):  # total cancellation at working precision
            return BigScalar.zero(bits)
        return BigScalar(hi.sign, ln, bits)

    def __radd__(self, other: Number) -> "BigScalar":
        return self.__add__(other)

    def __sub__(self, other: Number) -> "BigScalar":
        return self.__add__(-self._coerce(other))

    def __rsub__(self, other: Number) -> "BigScalar":
        return (-self).__add__(other)

    def __mul__(self, other: Number) -> "BigScalar":
        other = self._coerce(other)
        s = self.sign * other.sign
        if s == 0:
            return BigScalar.zero(max(self.precision_bits, other.precision_bits))
        bits = max(self.precision_bits, other.precision_bits)
        ctx = _ctx(bits)
        return BigScalar(s, ctx.add(self.ln_mag, other.ln_mag), bits)

    def __rmul__(self, other: Number) -> "BigScalar":
        return self.__mul__(other)

    def __truediv__(self, other: Number) -> "BigScalar":
        other = self._coerce(other)
        if other.sign == 0:
            raise DomainError("division by exact zero")
        if self.sign == 0:
            return BigScalar.zero(max(self.precision_bits, other.precision_bits))
        bits = max(self.precision_bits, other.precision_bits)
        ctx = _ctx(bits)
        return BigScalar(self.sign * other.sign, ctx.sub(self.ln_mag, other.ln_mag), bits)

    def __rtruediv__(self, other: Number) -> "BigScalar":
        return self._coerce(other).__truediv__(self)

    def reciprocal(self) -> "BigScalar":
        if self.sign == 0:
            raise DomainError("reciprocal of exact zero")
        return BigScalar(self.sign, -self.ln_mag, self.precision_bits)

    def sqrt(self) -> "BigScalar":
        if self.sign < 0:
            raise DomainError("sqrt of negative value")
        if self.sign == 0:
            return self
        ctx = _ctx(self.precision_bits)
        return BigScalar(1, ctx.div(self.ln_mag, gmpy2.mpfr(2)), self.precision_bits)

    def pow_int(self, n: int) -> "BigScalar":
        if n == 0:
            return BigScalar.one(self.precision_bits)
        if self.sign == 0:
            if n < 0:
                raise DomainError("0 to a negative power")
            return self
        ctx = _ctx(self.precision_bits)
        s = self.sign if n % 2 else 1
        return BigScalar(s, ctx.mul(self.ln_mag, gmpy2.mpfr(n)), self.precision_bits)

    # ---- comparisons (by represented value) ------------------------------

    def _cmp(self, other: Number) -> int:
        other = self._coerce(other)
        if self.sign != other.sign:
            return 1 if self.sign > other.sign else -1
        if self.sign == 0:
            return 0
        if self.ln_mag == other.ln_mag:
            return 0
        bigger_mag = 1 if self.ln_mag > other.ln_mag else -1
        return bigger_mag * self.sign

    def __lt__(self, other: Number) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Number) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Number) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Number) -> bool:
        return self._cmp(other) >= 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, (BigScalar, int, float, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self):
        return hash((self.sign, float(self.ln_mag)))

    # ---- rendering -------------------------------------------------------

    def to_decimal_sci(self, digits: int = 17) -> str:
        """Decimal scientific rendering ``m.mmm...e+EEE`` with the given
        number of significant digits; exact zero renders as ``0``."""
        if self.sign == 0:
            return "0"
        bits = max(self.precision_bits, 64)
        ctx = _ctx(bits)
        log10 = ctx.div(self.ln_mag, ctx.log(gmpy2.mpfr(10, bits)))
        e10 = int(gmpy2.floor(log10))
        mant = float(ctx.exp(ctx.mul(ctx.sub(log10, gmpy2.mpfr(e10)), ctx.log(gmpy2.mpfr(10, bits)))))
        # floating rounding may push the mantissa to 10.0
        if mant >= 10.0:
            mant /= 10.0
            e10 += 1
        body = f"{mant:.{digits - 1}f}"
        if self.sign < 0:
            body = "-" + body
        return f"{body}e{'+' if e10 >= 0 else '-'}{abs(e10):02d}"

    def __repr__(self):
        if self.sign == 0:
            return "BigScalar(0)"
        return f"BigScalar({'+' if self.sign > 0 else '-'}exp({float(self.ln_mag):.6g}))"


def big_arith(x: BigScalar, y: BigScalar, op: str) -> BigScalar:
    """Named-operation entry point: op in {'add','sub','mul','div'}."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise DomainError(f"unknown op {op!r}")


def lse_sum(values, bits: int = None) -> BigScalar:
    """Sum a sequence of BigScalars in one log-sum-exp pass.

    All exponentials are anchored at the maximal ln_mag, so the accumulation
    happens in the linear domain of ratios <= 1 and cannot overflow.
    """
    bits = bits or DEFAULT_PRECISION_BITS
    vals = [v for v in values if isinstance(v, BigScalar) and v.sign != 0]
    if not vals:
        return BigScalar.zero(bits)
    bits = max([bits] + [v.precision_bits for v in vals])
    ctx = _ctx(bits)
    m = max(v.ln_mag for v in vals)
    acc = gmpy2.mpfr(0, bits)
    for v in vals:
        acc = ctx.add(acc, ctx.mul(gmpy2.mpfr(v.sign), ctx.exp(ctx.sub(v.ln_mag, m))))
    if acc == 0:
        return BigScalar.zero(bits)
    s = 1 if acc > 0 else -1
    return BigScalar(s, ctx.add(m, ctx.log(abs(acc))), bits)
