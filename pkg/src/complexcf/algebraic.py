"""Quadratic surds over K, their Moebius images, and certified predicates.

A surd ``z0`` is a root of ``A z**2 + B z + C`` with ``B**2 - 4AC`` not a
square in K.  Every iterate of a continued-fraction run lives in the field
``L = K(s)`` with ``s`` the principal square root of the discriminant, so
states carry exact coordinates ``u + v*s`` (``u, v`` in K) next to the
unimodular matrix that produced them.

Real-valued quantities built from a state and its complex conjugate, such
as ``|z - a|**2 - c``, live in the span of ``1, s, conj(s), s*conj(s)`` over
K.  Their vanishing is decided by linear algebra on four coefficients; their
sign by interval refinement once they are known to be nonzero.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Sequence

from .errors import (
    AmbiguousSelector,
    PoleAtValue,
    PrecisionCapExceeded,
    ReducibleOverK,
)
from .intervals import ComplexInterval, RealInterval
from .rings import DEFAULT_MAX_BITS, DEFAULT_START_BITS, KElt, RingElt, RingId

__all__ = [
    "Cmp",
    "ExtElt",
    "AlgebraicValue",
    "SurdSpec",
    "SurdState",
    "make_surd",
    "moebius_image",
    "approximate",
    "states_equal",
    "cmp_abs2",
    "square_in_K",
]


class Cmp(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


# ---------------------------------------------------------------------------
# Square roots in K
# ---------------------------------------------------------------------------


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _sqrt_minus_d_coeff(x: KElt) -> tuple[Fraction, Fraction]:
    """Coordinates ``(p, q)`` with ``x = p + q*sqrt(-d)``."""
    half = 2 if x.ring.t else 1
    return x.re, Fraction(x.num.b, half * x.den)


def _from_sqrt_minus_d(p: Fraction, q: Fraction, ring: RingId) -> KElt:
    if ring.t:
        # sqrt(-d) = 2w - 1
        return KElt.from_coords(p - q, 2 * q, ring)
    return KElt.from_coords(p, q, ring)


def square_in_K(x: KElt) -> KElt | None:
    """A square root of ``x`` in K, or ``None`` when ``x`` is not a square.

    Of the two roots the one with lexicographically larger coordinates over
    ``{1, w}`` is returned.
    """
    ring = x.ring
    if x.is_zero():
        return x
    d = ring.d
    p, q = _sqrt_minus_d_coeff(x)
    # (alpha + beta*sqrt(-d))**2 = p + q*sqrt(-d)
    if q == 0:
        alpha = _rational_sqrt(p)
        if alpha is not None:
            root = _from_sqrt_minus_d(alpha, Fraction(0), ring)
        else:
            beta = _rational_sqrt(-p / d)
            if beta is None:
                return None
            root = _from_sqrt_minus_d(Fraction(0), beta, ring)
    else:
        m = _rational_sqrt(p * p + d * q * q)
        if m is None:
            return None
        alpha = _rational_sqrt((p + m) / 2)
        if alpha is None:
            return None
        root = _from_sqrt_minus_d(alpha, q / (2 * alpha), ring)
    assert root * root == x
    other = -root

    def coords(k: KElt) -> tuple[Fraction, Fraction]:
        return Fraction(k.num.a, k.den), Fraction(k.num.b, k.den)

    return root if coords(root) >= coords(other) else other


# ---------------------------------------------------------------------------
# The field L = K(s)
# ---------------------------------------------------------------------------


class ExtElt:
    """The element ``u + v*s`` of ``K(s)`` for a fixed surd base."""

    __slots__ = ("u", "v", "base")

    def __init__(self, u: KElt, v: KElt, base: SurdSpec):
        self.u = u
        self.v = v
        self.base = base

    def key(self) -> tuple:
        return (self.u.key(), self.v.key())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtElt):
            return NotImplemented
        return self.u == other.u and self.v == other.v

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"ExtElt({self.u} + ({self.v})*s)"

    def is_zero(self) -> bool:
        return self.u.is_zero() and self.v.is_zero()

    def _lift(self, other) -> ExtElt:
        if isinstance(other, ExtElt):
            return other
        return ExtElt(KElt.coerce(other, self.u.ring), KElt.coerce(0, self.u.ring), self.base)

    def __add__(self, other) -> ExtElt:
        if isinstance(other, ExtElt):
            return ExtElt(self.u + other.u, self.v + other.v, self.base)
        return ExtElt(self.u + other, self.v, self.base)

    __radd__ = __add__

    def __neg__(self) -> ExtElt:
        return ExtElt(-self.u, -self.v, self.base)

    def __sub__(self, other) -> ExtElt:
        if isinstance(other, ExtElt):
            return ExtElt(self.u - other.u, self.v - other.v, self.base)
        return ExtElt(self.u - other, self.v, self.base)

    def __rsub__(self, other) -> ExtElt:
        return (-self) + other

    def __mul__(self, other) -> ExtElt:
        if isinstance(other, ExtElt):
            disc = self.base.disc
            return ExtElt(
                self.u * other.u + self.v * other.v * disc,
                self.u * other.v + self.v * other.u,
                self.base,
            )
        return ExtElt(self.u * other, self.v * other, self.base)

    __rmul__ = __mul__

    def inverse(self) -> ExtElt:
        n = self.u * self.u - self.v * self.v * self.base.disc
        if n.is_zero():
            raise PoleAtValue("inverse of zero in K(s)")
        ninv = n.inverse()
        return ExtElt(self.u * ninv, -self.v * ninv, self.base)

    def __truediv__(self, other) -> ExtElt:
        if isinstance(other, ExtElt):
            return self * other.inverse()
        return self * KElt.coerce(other, self.u.ring).inverse()

    def __rtruediv__(self, other) -> ExtElt:
        return self.inverse() * other

    def enclosure(self, bits: int) -> ComplexInterval:
        s = self.base.sqrt_disc(bits)
        out = self.u.enclosure(bits)
        if not self.v.is_zero():
            out = out + self.v.enclosure(bits) * s
        return out

    def to_value(self) -> AlgebraicValue:
        z = KElt.coerce(0, self.u.ring)
        return AlgebraicValue((self.u, self.v, z, z), self.base)


# ---------------------------------------------------------------------------
# Span of 1, s, conj(s), s*conj(s)
# ---------------------------------------------------------------------------


class AlgebraicValue:
    """``c0 + c1*s + c2*conj(s) + c3*s*conj(s)`` with coefficients in K."""

    __slots__ = ("c", "base")

    def __init__(self, c: Sequence[KElt], base: SurdSpec):
        self.c = tuple(c)
        self.base = base

    @classmethod
    def constant(cls, x, base: SurdSpec) -> AlgebraicValue:
        ring = base.ring
        z = KElt.coerce(0, ring)
        return cls((KElt.coerce(x, ring), z, z, z), base)

    def __repr__(self) -> str:
        c0, c1, c2, c3 = self.c
        return f"AlgebraicValue({c0} + ({c1})s + ({c2})s~ + ({c3})ss~)"

    def _lift(self, other) -> AlgebraicValue:
        if isinstance(other, AlgebraicValue):
            return other
        if isinstance(other, ExtElt):
            return other.to_value()
        return AlgebraicValue.constant(other, self.base)

    def __add__(self, other) -> AlgebraicValue:
        o = self._lift(other)
        return AlgebraicValue([x + y for x, y in zip(self.c, o.c)], self.base)

    __radd__ = __add__

    def __neg__(self) -> AlgebraicValue:
        return AlgebraicValue([-x for x in self.c], self.base)

    def __sub__(self, other) -> AlgebraicValue:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> AlgebraicValue:
        return self._lift(other) - self

    def __mul__(self, other) -> AlgebraicValue:
        if isinstance(other, (int, Fraction, KElt, RingElt)):
            return AlgebraicValue([x * other for x in self.c], self.base)
        o = self._lift(other)
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = o.c
        D = self.base.disc
        Dc = D.conj()
        return AlgebraicValue(
            (
                a0 * b0 + a1 * b1 * D + a2 * b2 * Dc + a3 * b3 * D * Dc,
                a0 * b1 + a1 * b0 + (a2 * b3 + a3 * b2) * Dc,
                a0 * b2 + a2 * b0 + (a1 * b3 + a3 * b1) * D,
                a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
            ),
            self.base,
        )

    __rmul__ = __mul__

    def conj(self) -> AlgebraicValue:
        c0, c1, c2, c3 = self.c
        return AlgebraicValue((c0.conj(), c2.conj(), c1.conj(), c3.conj()), self.base)

    def is_zero(self) -> bool:
        c0, c1, c2, c3 = self.c
        kappa = self.base.conj_ratio()
        if kappa is None:
            return all(x.is_zero() for x in self.c)
        # conj(s) = kappa*s, so s*conj(s) = kappa*disc
        return (c0 + c3 * kappa * self.base.disc).is_zero() and (c1 + c2 * kappa).is_zero()

    def enclosure(self, bits: int) -> ComplexInterval:
        s = self.base.sqrt_disc(bits)
        sc = s.conj()
        c0, c1, c2, c3 = self.c
        out = c0.enclosure(bits)
        if not c1.is_zero():
            out = out + c1.enclosure(bits) * s
        if not c2.is_zero():
            out = out + c2.enclosure(bits) * sc
        if not c3.is_zero():
            out = out + c3.enclosure(bits) * (s * sc)
        return out

    def real_sign(self, start_bits: int = DEFAULT_START_BITS) -> int:
        """Exact sign of the real part (the value is assumed real)."""
        base = self.base
        bits = start_bits
        checked_zero = False
        while True:
            sg = self.enclosure(bits).re.sign()
            if sg is not None:
                return sg
            if not checked_zero and base.exact_boundary:
                if self.is_zero():
                    return 0
                checked_zero = True
            if bits >= base.max_bits:
                raise PrecisionCapExceeded(f"sign undecided at {bits} bits")
            bits *= 2


# ---------------------------------------------------------------------------
# Surds and states
# ---------------------------------------------------------------------------


def _as_ring(x, ring: RingId) -> RingElt:
    if isinstance(x, RingElt):
        return x
    if isinstance(x, KElt):
        return x.to_ring()
    if isinstance(x, int):
        return RingElt(x, 0, ring)
    if isinstance(x, str):
        return RingElt.parse(x, ring)
    raise TypeError(f"cannot read {x!r} as an element of {ring}")


class SurdSpec:
    """A root of ``A z**2 + B z + C`` (irreducible over K), isolated by ``root_box``.

    The root is ``(-B + sign*s) / (2A)`` where ``s`` is the principal square
    root of ``disc = B**2 - 4AC``.
    """

    def __init__(
        self,
        ring: RingId,
        A: RingElt,
        B: RingElt,
        C: RingElt,
        sign: int,
        *,
        max_bits: int = DEFAULT_MAX_BITS,
        exact_boundary: bool = True,
    ):
        self.ring = ring
        self.A, self.B, self.C = A, B, C
        self.disc = KElt.from_ring(B * B - 4 * A * C)
        self.sign = sign
        self.max_bits = max_bits
        self.exact_boundary = exact_boundary
        self._sqrt_cache: dict[int, ComplexInterval] = {}
        self._kappa: tuple[KElt | None] | None = None
        two_a = KElt.from_ring(2 * A)
        self.root_value = ExtElt(-KElt.from_ring(B) / two_a, KElt.coerce(sign, ring) / two_a, self)
        self.root_box: ComplexInterval | None = None

    @property
    def coefficients(self) -> tuple[RingElt, RingElt, RingElt]:
        return (self.A, self.B, self.C)

    def __repr__(self) -> str:
        return f"SurdSpec({self.ring}, A={self.A}, B={self.B}, C={self.C}, sign={self.sign:+d})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SurdSpec):
            return NotImplemented
        return (
            self.ring is other.ring
            and (self.A, self.B, self.C, self.sign) == (other.A, other.B, other.C, other.sign)
        )

    def __hash__(self) -> int:
        return hash((self.ring.tag, self.A, self.B, self.C, self.sign))

    def sqrt_disc(self, bits: int) -> ComplexInterval:
        """Enclosure of the principal square root of the discriminant."""
        hit = self._sqrt_cache.get(bits)
        if hit is not None:
            return hit
        D = self.disc
        g = bits + 8
        x = RealInterval.exact(D.re, g)
        n = D.norm()
        m = RealInterval.sqrt_ratio(n.numerator, n.denominator, g)
        re_ = ((m + x) * RealInterval.exact(Fraction(1, 2), g)).sqrt()
        im = ((m - x) * RealInterval.exact(Fraction(1, 2), g)).sqrt()
        if D.im_sign < 0:
            im = -im
        out = ComplexInterval(re_.to_bits(bits), im.to_bits(bits))
        # copy-on-write: the dict entry is replaced atomically
        self._sqrt_cache = {**self._sqrt_cache, bits: out}
        return out

    def conj_ratio(self) -> KElt | None:
        """``kappa`` in K with ``conj(s) = kappa*s``, or ``None`` if none exists."""
        if self._kappa is None:
            self._kappa = (self._find_kappa(),)
        return self._kappa[0]

    def _find_kappa(self) -> KElt | None:
        k0 = square_in_K(self.disc.conj() / self.disc)
        if k0 is None:
            return None
        bits = DEFAULT_START_BITS
        while True:
            s = self.sqrt_disc(bits)
            sc = s.conj()
            plus = (k0.enclosure(bits) * s).overlaps(sc)
            minus = ((-k0).enclosure(bits) * s).overlaps(sc)
            if plus != minus:
                return k0 if plus else -k0
            bits *= 2

    def root(self) -> SurdState:
        ring = self.ring
        one, zero = ring.one(), ring.zero()
        return SurdState(self, (one, zero, zero, one), self.root_value)

    def minimal_polynomial_matches(self, a: RingElt, b: RingElt, c: RingElt) -> bool:
        """Whether ``a z**2 + b z + c`` is zero or a K-multiple of this polynomial."""
        A, B, C = self.A, self.B, self.C
        return (a * B - b * A).is_zero() and (a * C - c * A).is_zero() and (b * C - c * B).is_zero()

    def enclosure(self, bits: int = DEFAULT_START_BITS) -> ComplexInterval:
        return self.root_value.enclosure(bits)


class SurdState:
    """The value ``h(z0)`` for a unimodular ``h`` over the ring.

    ``moebius`` holds ``h`` as ``(h11, h12, h21, h22)``; ``value`` holds the
    same number in coordinates over ``K(s)``.
    """

    __slots__ = ("base", "moebius", "value", "_enc")

    refinable = True

    def __init__(self, base: SurdSpec, moebius: tuple, value: ExtElt):
        self.base = base
        self.moebius = moebius
        self.value = value
        self._enc: dict[int, ComplexInterval] = {}

    def __repr__(self) -> str:
        return f"SurdState(~{complex(self)!r})"

    @property
    def ring(self) -> RingId:
        return self.base.ring

    def key(self) -> tuple:
        return self.value.key()

    def determinant(self) -> RingElt:
        a, b, c, d = self.moebius
        return a * d - b * c

    def enclosure(self, bits: int = DEFAULT_START_BITS) -> ComplexInterval:
        hit = self._enc.get(bits)
        if hit is None:
            hit = self.value.enclosure(bits)
            self._enc = {**self._enc, bits: hit}
        return hit

    def __complex__(self) -> complex:
        return self.enclosure(DEFAULT_START_BITS).mid

    # point protocol used by the ring queries
    def exact_abs2_cmp(self, g, c) -> int:
        return _abs2_minus(self.value - g, c).real_sign()

    def exact_dist_cmp(self, g, h) -> int:
        return (_abs2_minus(self.value - g, 0) - _abs2_minus(self.value - h, 0)).real_sign()


def _abs2_minus(w: ExtElt, c) -> AlgebraicValue:
    """``|w|**2 - c`` in the span of ``1, s, conj(s), s*conj(s)``."""
    u, v = w.u, w.v
    uc, vc = u.conj(), v.conj()
    return AlgebraicValue((u * uc - c, v * uc, u * vc, v * vc), w.base)


def _re_value(w: ExtElt) -> AlgebraicValue:
    """``2*Re(w)``."""
    v = w.to_value()
    return v + v.conj()


def _im_value(w: ExtElt) -> AlgebraicValue:
    """A positive multiple of ``Im(w)``."""
    ring = w.base.ring
    iota = KElt.from_coords(Fraction(-ring.t, 2), 1, ring)  # w - t/2 = i*Im(w)
    return _re_value(w * iota.conj())


def make_surd(
    ring: RingId,
    A,
    B,
    C,
    root_selector: ComplexInterval | complex | None = None,
    *,
    max_bits: int = DEFAULT_MAX_BITS,
    exact_boundary: bool = True,
) -> SurdSpec:
    """Validate ``A z**2 + B z + C`` and isolate one of its roots.

    ``root_selector`` may be a box (which must overlap exactly one root at
    some precision), an approximate complex number (the nearer root is
    taken), or ``None`` for the root with larger real part, then larger
    imaginary part.
    """
    A, B, C = (_as_ring(x, ring) for x in (A, B, C))
    if A.is_zero():
        raise ValueError("leading coefficient must be nonzero")
    disc = KElt.from_ring(B * B - 4 * A * C)
    if square_in_K(disc) is not None:
        raise ReducibleOverK(f"{A}z^2 + ({B})z + ({C}) factors over K({ring})")
    plus = SurdSpec(ring, A, B, C, +1, max_bits=max_bits, exact_boundary=exact_boundary)
    minus = SurdSpec(ring, A, B, C, -1, max_bits=max_bits, exact_boundary=exact_boundary)
    diff = plus.root_value - minus.root_value.u  # s/A, same base as `plus`

    if root_selector is None:
        sg = _re_value(diff).real_sign()
        if sg == 0:
            sg = _im_value(diff).real_sign()
        chosen = plus if sg > 0 else minus
    elif isinstance(root_selector, ComplexInterval):
        chosen = None
        bits = DEFAULT_START_BITS
        while chosen is None:
            hp = root_selector.overlaps(plus.enclosure(bits))
            hm = root_selector.overlaps(minus.enclosure(bits))
            if hp != hm:
                chosen = plus if hp else minus
            elif not hp:
                raise AmbiguousSelector("selector box contains neither root")
            elif bits >= max_bits:
                raise AmbiguousSelector("selector box contains both roots")
            else:
                bits *= 2
    else:
        target = complex(root_selector)
        bits = DEFAULT_START_BITS
        box = ComplexInterval.around(target, 0, bits)
        while True:
            dp = (plus.enclosure(bits) - box).abs2()
            dm = (minus.enclosure(bits) - box).abs2()
            if dp.certainly_lt(dm):
                chosen = plus
                break
            if dm.certainly_lt(dp):
                chosen = minus
                break
            if bits >= max_bits:
                raise AmbiguousSelector("selector is equidistant from both roots")
            bits *= 2
    other = minus if chosen is plus else plus
    bits = DEFAULT_START_BITS
    while True:
        box = chosen.enclosure(bits)
        if not box.overlaps(other.enclosure(bits)):
            chosen.root_box = box
            return chosen
        bits *= 2


def _mat_mul(g, h) -> tuple:
    a, b, c, d = g
    e, f, k, l = h
    return (a * e + b * k, a * f + b * l, c * e + d * k, c * f + d * l)


def _flat(g) -> tuple:
    if len(g) == 2:
        return (g[0][0], g[0][1], g[1][0], g[1][1])
    return tuple(g)


def moebius_image(g, s: SurdState) -> SurdState:
    """The state ``(g11 v + g12) / (g21 v + g22)`` for ``v`` the value of ``s``."""
    ring = s.ring
    g = tuple(_as_ring(x, ring) for x in _flat(g))
    det = g[0] * g[3] - g[1] * g[2]
    if det != 1 and det != -1:
        raise ValueError(f"matrix determinant {det} is not +-1")
    v = s.value
    num = v * KElt.from_ring(g[0]) + KElt.from_ring(g[1])
    den = v * KElt.from_ring(g[2]) + KElt.from_ring(g[3])
    if den.is_zero():
        raise PoleAtValue("denominator vanishes at the state value")
    return SurdState(s.base, _mat_mul(g, s.moebius), num / den)


def step_state(s: SurdState, a: RingElt) -> SurdState:
    """``1 / (v - a)``: the image under ``[[0, 1], [1, -a]]``."""
    m11, m12, m21, m22 = s.moebius
    w = s.value - KElt.from_ring(a)
    if w.is_zero():
        raise PoleAtValue("state equals the partial quotient")
    return SurdState(s.base, (m21, m22, m11 - a * m21, m12 - a * m22), w.inverse())


def approximate(s: SurdState | SurdSpec, eps, *, max_bits: int | None = None) -> ComplexInterval:
    """An enclosure of width at most ``eps`` in both coordinates."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if isinstance(s, SurdSpec):
        s = s.root()
    cap = s.base.max_bits if max_bits is None else max_bits
    bits = DEFAULT_START_BITS
    while True:
        box = s.enclosure(bits)
        if box.width <= eps:
            return box
        if bits >= cap:
            raise PrecisionCapExceeded(f"width {float(box.width):.3g} > {float(eps):.3g} at {bits} bits")
        bits *= 2


def states_equal(s1: SurdState, s2: SurdState) -> bool:
    """Exact equality of two states over the same base root."""
    if s1.base != s2.base:
        raise ValueError("states belong to different surds")
    if not s1.enclosure().overlaps(s2.enclosure()):
        return False
    # h2^-1 h1 must fix z0: gamma z^2 + (delta - alpha) z - beta vanishes at z0
    a, b, c, d = s2.moebius
    det = a * d - b * c
    inv = (d * det, -b * det, -c * det, a * det)  # det = +-1 is its own inverse
    alpha, beta, gamma, delta = _mat_mul(inv, s1.moebius)
    return s1.base.minimal_polynomial_matches(gamma, delta - alpha, -beta)


def cmp_abs2(s, a, c) -> Cmp:
    """Certified comparison of ``|v - a|**2`` against the rational ``c``."""
    c = Fraction(c)
    if isinstance(s, ComplexInterval):
        from .rings import _BoxPoint

        point = _BoxPoint(s)
        a = _as_ring(a, point_ring(a))
        d2 = (s - a.enclosure(s.bits)).abs2()
        if d2.certainly_lt(c):
            return Cmp.LESS
        if d2.lower > c:
            return Cmp.GREATER
        exact = point.exact_abs2_cmp(a, c)
        if exact is None:
            raise PrecisionCapExceeded("a bare enclosure cannot be refined")
        return Cmp(exact)
    a = _as_ring(a, s.ring)
    d2 = (s.enclosure() - a.enclosure()).abs2()
    if d2.certainly_lt(c):
        return Cmp.LESS
    if d2.lower > c:
        return Cmp.GREATER
    return Cmp(s.exact_abs2_cmp(KElt.from_ring(a), c))


def point_ring(a) -> RingId:
    if isinstance(a, (RingElt, KElt)):
        return a.ring
    return RingId.G
