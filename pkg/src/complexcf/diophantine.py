"""Norms, circles with no K-rational points, and separating circles.

A circle ``|z - c|**2 = m/n`` with centre ``c`` in K and coprime ``m, n``
contains a K-rational point exactly when both ``m`` and ``n`` are norms of
ring elements.  Circles without such points consist entirely of badly
approximable numbers, which makes them useful as barriers between points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebraic import SurdSpec, make_surd
from .errors import PointInK, ReducibleOverK, SearchExhausted
from .forms import FormMatrix, Sigma, eval_form
from .intervals import ComplexInterval
from .rings import KElt, RingElt, RingId

__all__ = [
    "CircleSpec",
    "AllBad",
    "HasRationalPoint",
    "is_norm",
    "congruence_obstruction",
    "classify_circle",
    "circle_form",
    "circle_point_surd",
    "separating_circle",
]


@dataclass(frozen=True)
class CircleSpec:
    """The circle ``|z - center|**2 = radius_sq`` with ``center`` in K."""

    ring: RingId
    center: KElt
    radius_sq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", KElt.coerce(self.center, self.ring))
        object.__setattr__(self, "radius_sq", Fraction(self.radius_sq))
        if self.center.ring is not self.ring:
            raise ValueError("centre must lie in the quotient field of the ring")
        if self.radius_sq <= 0:
            raise ValueError("squared radius must be positive")

    @property
    def m(self) -> int:
        return self.radius_sq.numerator

    @property
    def n(self) -> int:
        return self.radius_sq.denominator

    def contains(self, w: KElt) -> bool:
        return (KElt.coerce(w, self.ring) - self.center).norm() == self.radius_sq


@dataclass(frozen=True)
class AllBad:
    """No K-rational point: ``failing`` lists the integers that are not norms.

    ``moduli`` pairs each failing integer with a congruence certificate when
    one exists (``None`` otherwise).
    """

    failing: tuple[int, ...]
    moduli: tuple[int | None, ...]

    @property
    def modulus(self) -> int | None:
        return next((m for m in self.moduli if m is not None), None)


@dataclass(frozen=True)
class HasRationalPoint:
    witness: KElt


@lru_cache(maxsize=None)
def is_norm(ring: RingId, n: int) -> RingElt | None:
    """An element of norm ``n``, or ``None``.

    The witness has the smallest ``b >= 0`` and, for that ``b``, the largest
    ``a``.
    """
    if n < 0:
        return None
    if n == 0:
        return ring.zero()
    t, im4 = ring.t, ring.im4
    # 4 * norm(a + b w) = (2a + t b)**2 + im4 * b**2
    b = 0
    while im4 * b * b <= 4 * n:
        rest = 4 * n - im4 * b * b
        u = math.isqrt(rest)
        if u * u == rest:
            for s in (u, -u):
                if (s - t * b) % 2 == 0:
                    return RingElt((s - t * b) // 2, b, ring)
        b += 1
    return None


def congruence_obstruction(ring: RingId, n: int) -> int | None:
    """A modulus proving ``n`` is not a norm, if the simple test applies."""
    if ring in (RingId.G, RingId.R2):
        return 8 if n % 8 == 7 else None
    j = ring.d
    return j if n % j == j - 1 else None


def _is_norm_certified(ring: RingId, n: int) -> tuple[bool, int | None]:
    mod = congruence_obstruction(ring, n)
    if mod is not None:
        return False, mod
    return is_norm(ring, n) is not None, None


def classify_circle(ring: RingId, c: CircleSpec) -> AllBad | HasRationalPoint:
    """Whether the circle meets K, with a witness or an obstruction."""
    if c.ring is not ring:
        raise ValueError("circle belongs to another ring")
    failing, moduli = [], []
    for v in (c.m, c.n):
        ok, mod = _is_norm_certified(ring, v)
        if not ok:
            failing.append(v)
            moduli.append(mod)
    if failing:
        return AllBad(tuple(failing), tuple(moduli))
    p, q = is_norm(ring, c.m), is_norm(ring, c.n)
    witness = c.center + KElt.from_ring(p) / q
    if not c.contains(witness):
        raise AssertionError("norm witness does not lie on the circle")
    return HasRationalPoint(witness)


def circle_form(c: CircleSpec) -> FormMatrix:
    """Hermitian form ``n|w - center|**2 - m`` vanishing exactly on the circle."""
    n, m = c.n, c.m
    zeta = c.center
    B = -zeta * n
    return FormMatrix(n, B, B.conj(), zeta.norm() * n - m, sigma=Sigma.CONJUGATION, ring=c.ring)


def _clear_denominators(coeffs: list[KElt]) -> list[RingElt]:
    k = 1
    for x in coeffs:
        k = k * x.den // math.gcd(k, x.den)
    return [(x * k).to_ring() for x in coeffs]


def circle_point_surd(ring: RingId, c: CircleSpec, x) -> SurdSpec:
    """The point ``center + x + i*y`` (``y > 0``) on the circle, as a surd."""
    x = Fraction(x)
    y2 = c.radius_sq - x * x
    if y2 <= 0:
        raise ValueError("offset lies outside the circle's horizontal extent")
    shift = c.center + x
    # (w - shift)**2 = -y2
    coeffs = _clear_denominators([KElt.coerce(1, ring), -shift * 2, shift * shift + y2])
    try:
        spec = make_surd(ring, *coeffs)
    except ReducibleOverK as exc:
        raise PointInK(f"the point at offset {x} is K-rational") from exc
    if not eval_form(circle_form(c), spec.root(), 1).is_zero():
        raise AssertionError("constructed point is not on the circle")
    return spec


def _round_to_lattice(z: complex, D: int, ring: RingId) -> KElt:
    im_w = math.sqrt(ring.im4) / 2
    b = round(z.imag * D / im_w)
    a = round(z.real * D - b * ring.t / 2)
    return KElt(RingElt(a, b, ring), D)


def separating_circle(
    ring: RingId,
    z: ComplexInterval,
    w: ComplexInterval,
    *,
    max_den: int = 10**6,
    max_center_den: int = 1 << 20,
) -> CircleSpec:
    """A circle without K-points having ``z`` strictly inside and ``w`` strictly outside."""
    if z.overlaps(w):
        raise ValueError("enclosures must be disjoint")
    bits = max(z.bits, w.bits)
    D = 1
    while True:
        zeta = _round_to_lattice(z.mid, D, ring)
        ze = zeta.enclosure(bits)
        lo = (z - ze).abs2().upper
        hi = (w - ze).abs2().lower
        if lo < hi:
            break
        D *= 2
        if D > max_center_den:
            raise SearchExhausted("no centre separates the two enclosures")
    for n in range(1, max_den + 1):
        m = math.floor(lo * n) + 1
        while Fraction(m, n) < hi:
            if math.gcd(m, n) == 1:
                c = CircleSpec(ring, zeta, Fraction(m, n))
                if isinstance(classify_circle(ring, c), AllBad):
                    return c
            m += 1
    raise SearchExhausted(f"no obstructed radius with denominator <= {max_den}")
