"""Outward-rounded dyadic interval arithmetic.

Endpoints are stored as integers scaled by ``2**-bits`` (fixed point), so
every operation is plain integer arithmetic.  Results are rounded outward,
which keeps every enclosure sound regardless of the working precision.
"""

from __future__ import annotations

from fractions import Fraction
import math
from math import isqrt
from numbers import Rational

__all__ = ["RealInterval", "ComplexInterval"]


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _isqrt_ceil(n: int) -> int:
    r = isqrt(n)
    return r if r * r == n else r + 1


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, (float, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


class RealInterval:
    """Closed interval ``[lo, hi] * 2**-bits`` with integer ``lo``, ``hi``."""

    __slots__ = ("lo", "hi", "bits")

    def __init__(self, lo: int, hi: int, bits: int):
        if lo > hi:
            raise ValueError("empty interval")
        self.lo = lo
        self.hi = hi
        self.bits = bits

    # -- construction ---------------------------------------------------

    @classmethod
    def from_ratio(cls, num: int, den: int, bits: int) -> RealInterval:
        if den < 0:
            num, den = -num, -den
        scaled = num << bits
        return cls(scaled // den, _ceil_div(scaled, den), bits)

    @classmethod
    def exact(cls, x, bits: int) -> RealInterval:
        q = _to_fraction(x)
        return cls.from_ratio(q.numerator, q.denominator, bits)

    @classmethod
    def from_bounds(cls, lo, hi, bits: int = 64) -> RealInterval:
        lo, hi = _to_fraction(lo), _to_fraction(hi)
        return cls(
            (lo.numerator << bits) // lo.denominator,
            _ceil_div(hi.numerator << bits, hi.denominator),
            bits,
        )

    @classmethod
    def sqrt_ratio(cls, num: int, den: int, bits: int) -> RealInterval:
        """Enclosure of ``sqrt(num/den)`` for ``num/den >= 0``."""
        if num < 0 or den <= 0:
            raise ValueError("square root of a negative ratio")
        scaled = num << (2 * bits)
        return cls(isqrt(scaled // den), _isqrt_ceil(_ceil_div(scaled, den)), bits)

    # -- views ----------------------------------------------------------

    @property
    def lower(self) -> Fraction:
        return Fraction(self.lo, 1 << self.bits)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.hi, 1 << self.bits)

    @property
    def width(self) -> Fraction:
        return Fraction(self.hi - self.lo, 1 << self.bits)

    @property
    def mid(self) -> float:
        s, b = self.lo + self.hi, self.bits + 1
        if b > 64:
            return math.ldexp(s >> (b - 64), -64)
        return math.ldexp(s, -b)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def contains(self, x) -> bool:
        if isinstance(x, RealInterval):
            a, b = _align(self, x)
            return a.lo <= b.lo and b.hi <= a.hi
        q = _to_fraction(x)
        return self.lower <= q <= self.upper

    def overlaps(self, other: RealInterval) -> bool:
        a, b = _align(self, other)
        return a.lo <= b.hi and b.lo <= a.hi

    def certainly_lt(self, other) -> bool:
        if not isinstance(other, RealInterval):
            return self.upper < _to_fraction(other)
        a, b = _align(self, other)
        return a.hi < b.lo

    def certainly_le(self, other) -> bool:
        if not isinstance(other, RealInterval):
            return self.upper <= _to_fraction(other)
        a, b = _align(self, other)
        return a.hi <= b.lo

    def sign(self) -> int | None:
        """Certified sign, or ``None`` when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def __repr__(self) -> str:
        return f"RealInterval([{float(self.lower)!r}, {float(self.upper)!r}], bits={self.bits})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, RealInterval):
            return NotImplemented
        return self.lower == other.lower and self.upper == other.upper

    def __hash__(self) -> int:
        return hash((self.lower, self.upper))

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> RealInterval:
        if isinstance(other, RealInterval):
            return other
        return RealInterval.exact(other, self.bits)

    def __neg__(self) -> RealInterval:
        return RealInterval(-self.hi, -self.lo, self.bits)

    def __add__(self, other) -> RealInterval:
        a, b = _align(self, self._coerce(other))
        return RealInterval(a.lo + b.lo, a.hi + b.hi, a.bits)

    __radd__ = __add__

    def __sub__(self, other) -> RealInterval:
        a, b = _align(self, self._coerce(other))
        return RealInterval(a.lo - b.hi, a.hi - b.lo, a.bits)

    def __rsub__(self, other) -> RealInterval:
        return self._coerce(other) - self

    def __mul__(self, other) -> RealInterval:
        if isinstance(other, int):
            lo, hi = self.lo * other, self.hi * other
            return RealInterval(min(lo, hi), max(lo, hi), self.bits)
        a, b = _align(self, self._coerce(other))
        p = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
        s = a.bits
        return RealInterval(min(p) >> s, -((-max(p)) >> s), s)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RealInterval:
        a, b = _align(self, self._coerce(other))
        if b.lo <= 0 <= b.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        s = a.bits
        lows, highs = [], []
        for x in (a.lo, a.hi):
            for y in (b.lo, b.hi):
                lows.append((x << s) // y)
                highs.append(_ceil_div(x << s, y))
        return RealInterval(min(lows), max(highs), s)

    def __rtruediv__(self, other) -> RealInterval:
        return self._coerce(other) / self

    def square(self) -> RealInterval:
        s = self.bits
        if self.lo >= 0:
            lo, hi = self.lo * self.lo, self.hi * self.hi
        elif self.hi <= 0:
            lo, hi = self.hi * self.hi, self.lo * self.lo
        else:
            lo, hi = 0, max(self.lo * self.lo, self.hi * self.hi)
        return RealInterval(lo >> s, -((-hi) >> s), s)

    def __abs__(self) -> RealInterval:
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RealInterval(0, max(-self.lo, self.hi), self.bits)

    def sqrt(self) -> RealInterval:
        if self.hi < 0:
            raise ValueError("square root of a negative interval")
        s = self.bits
        lo = isqrt(max(self.lo, 0) << s)
        return RealInterval(lo, _isqrt_ceil(self.hi << s), s)

    def max(self, other: RealInterval) -> RealInterval:
        a, b = _align(self, other)
        return RealInterval(max(a.lo, b.lo), max(a.hi, b.hi), a.bits)

    def min(self, other: RealInterval) -> RealInterval:
        a, b = _align(self, other)
        return RealInterval(min(a.lo, b.lo), min(a.hi, b.hi), a.bits)

    def hull(self, other: RealInterval) -> RealInterval:
        a, b = _align(self, other)
        return RealInterval(min(a.lo, b.lo), max(a.hi, b.hi), a.bits)

    def to_bits(self, bits: int) -> RealInterval:
        if bits >= self.bits:
            d = bits - self.bits
            return RealInterval(self.lo << d, self.hi << d, bits)
        d = self.bits - bits
        return RealInterval(self.lo >> d, -((-self.hi) >> d), bits)


def _align(a: RealInterval, b: RealInterval) -> tuple[RealInterval, RealInterval]:
    if a.bits == b.bits:
        return a, b
    if a.bits > b.bits:
        return a, b.to_bits(a.bits)
    return a.to_bits(b.bits), b


class ComplexInterval:
    """Axis-aligned box ``re x im`` in the complex plane."""

    __slots__ = ("re", "im")

    def __init__(self, re: RealInterval, im: RealInterval):
        if re.bits != im.bits:
            re, im = _align(re, im)
        self.re = re
        self.im = im

    @classmethod
    def from_bounds(cls, re_lo, re_hi, im_lo, im_hi, bits: int = 64) -> ComplexInterval:
        return cls(
            RealInterval.from_bounds(re_lo, re_hi, bits),
            RealInterval.from_bounds(im_lo, im_hi, bits),
        )

    @classmethod
    def point(cls, re, im=0, bits: int = 64) -> ComplexInterval:
        return cls(RealInterval.exact(re, bits), RealInterval.exact(im, bits))

    @classmethod
    def around(cls, z: complex, radius, bits: int = 64) -> ComplexInterval:
        """Box of half-width ``radius`` centred on the float ``z``."""
        r = _to_fraction(radius)
        x, y = Fraction(z.real), Fraction(z.imag)
        return cls.from_bounds(x - r, x + r, y - r, y + r, bits)

    @property
    def bits(self) -> int:
        return self.re.bits

    @property
    def precision(self) -> int:
        return self.re.bits

    @property
    def re_lo(self) -> Fraction:
        return self.re.lower

    @property
    def re_hi(self) -> Fraction:
        return self.re.upper

    @property
    def im_lo(self) -> Fraction:
        return self.im.lower

    @property
    def im_hi(self) -> Fraction:
        return self.im.upper

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    @property
    def mid(self) -> complex:
        return complex(self.re.mid, self.im.mid)

    def is_point(self) -> bool:
        return self.re.is_point() and self.im.is_point()

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def contains(self, other: ComplexInterval) -> bool:
        return self.re.contains(other.re) and self.im.contains(other.im)

    def overlaps(self, other: ComplexInterval) -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def to_bits(self, bits: int) -> ComplexInterval:
        return ComplexInterval(self.re.to_bits(bits), self.im.to_bits(bits))

    def __repr__(self) -> str:
        return (
            f"ComplexInterval(re=[{float(self.re_lo)!r}, {float(self.re_hi)!r}], "
            f"im=[{float(self.im_lo)!r}, {float(self.im_hi)!r}], bits={self.bits})"
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexInterval):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def _coerce(self, other) -> ComplexInterval:
        if isinstance(other, ComplexInterval):
            return other
        if isinstance(other, RealInterval):
            return ComplexInterval(other, RealInterval(0, 0, other.bits))
        if isinstance(other, complex):
            return ComplexInterval.point(other.real, other.imag, self.bits)
        return ComplexInterval.point(other, 0, self.bits)

    def __neg__(self) -> ComplexInterval:
        return ComplexInterval(-self.re, -self.im)

    def conj(self) -> ComplexInterval:
        return ComplexInterval(self.re, -self.im)

    def __add__(self, other) -> ComplexInterval:
        o = self._coerce(other)
        return ComplexInterval(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> ComplexInterval:
        o = self._coerce(other)
        return ComplexInterval(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> ComplexInterval:
        return self._coerce(other) - self

    def __mul__(self, other) -> ComplexInterval:
        if isinstance(other, (int, RealInterval)):
            return ComplexInterval(self.re * other, self.im * other)
        o = self._coerce(other)
        return ComplexInterval(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def abs2(self) -> RealInterval:
        return self.re.square() + self.im.square()

    def __abs__(self) -> RealInterval:
        return self.abs2().sqrt()

    def __truediv__(self, other) -> ComplexInterval:
        if isinstance(other, (int, RealInterval)):
            return ComplexInterval(self.re / other, self.im / other)
        o = self._coerce(other)
        n = o.abs2()
        if n.lo <= 0:
            raise ZeroDivisionError("interval divisor contains zero")
        num = self * o.conj()
        return ComplexInterval(num.re / n, num.im / n)

    def __rtruediv__(self, other) -> ComplexInterval:
        return self._coerce(other) / self

    def reciprocal(self) -> ComplexInterval:
        n = self.abs2()
        if n.lo <= 0:
            raise ZeroDivisionError("interval divisor contains zero")
        return ComplexInterval(self.re / n, (-self.im) / n)
