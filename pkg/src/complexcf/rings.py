"""The five discrete Euclidean subrings of C and their quotient fields.

Every ring is ``Z[w]`` for a fixed ``w`` with ``w**2 = t*w - n``; elements
are integer pairs ``(a, b)`` meaning ``a + b*w``.  The half-integer rings
never expose half-integer coordinates, so norms and equality stay integral.
"""

from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Protocol

from .errors import AmbiguousBoundary, AmbiguousTie
from .intervals import ComplexInterval, RealInterval

__all__ = [
    "RingId",
    "RingElt",
    "KElt",
    "norm",
    "units",
    "covering_radius",
    "covering_radius_sq",
    "elements_of_norm",
    "lattice_points_near",
    "nearest_elements",
    "elements_within",
    "ring_gcd",
    "DEFAULT_START_BITS",
    "DEFAULT_MAX_BITS",
]

DEFAULT_START_BITS = 64
DEFAULT_MAX_BITS = 1 << 16


class RingId(enum.Enum):
    """Tag for one of the five rings; ``w`` satisfies ``w**2 = t*w - n``."""

    G = ("G", 0, 1, "i")
    R2 = ("R2", 0, 2, "sqrt(2)*i")
    E3 = ("E3", 1, 1, "(1+sqrt(3)*i)/2")
    E7 = ("E7", 1, 2, "(1+sqrt(7)*i)/2")
    E11 = ("E11", 1, 3, "(1+sqrt(11)*i)/2")

    def __init__(self, tag: str, t: int, n: int, omega: str):
        self.tag = tag
        self.t = t
        self.n = n
        self.omega = omega
        # Im(w)**2 = n - t**2/4; we keep 4*Im(w)**2 as an integer.
        self.im4 = 4 * n - t * t

    @property
    def d(self) -> int:
        """Squarefree ``d`` with K = Q(sqrt(-d))."""
        return {"G": 1, "R2": 2, "E3": 3, "E7": 7, "E11": 11}[self.tag]

    @property
    def im_omega_sq(self) -> Fraction:
        return Fraction(self.im4, 4)

    @classmethod
    def from_tag(cls, tag: str) -> RingId:
        for r in cls:
            if r.tag.lower() == tag.strip().lower():
                return r
        raise ValueError(f"unknown ring tag {tag!r}; expected one of G, R2, E3, E7, E11")

    def __repr__(self) -> str:
        return f"RingId.{self.tag}"

    def __str__(self) -> str:
        return self.tag

    def zero(self) -> RingElt:
        return RingElt(0, 0, self)

    def one(self) -> RingElt:
        return RingElt(1, 0, self)

    def omega_elt(self) -> RingElt:
        return RingElt(0, 1, self)

    def __call__(self, a: int = 0, b: int = 0) -> RingElt:
        return RingElt(a, b, self)


def _coerce_ring(x, ring: RingId) -> RingElt:
    if isinstance(x, RingElt):
        if x.ring is not ring:
            raise ValueError(f"mixing rings {x.ring} and {ring}")
        return x
    if isinstance(x, int):
        return RingElt(x, 0, ring)
    raise TypeError(f"cannot coerce {x!r} into {ring}")


class RingElt:
    """The element ``a + b*w`` of a ring."""

    __slots__ = ("a", "b", "ring")

    def __init__(self, a: int, b: int, ring: RingId):
        self.a = a
        self.b = b
        self.ring = ring

    @classmethod
    def parse(cls, text: str, ring: RingId) -> RingElt:
        """Parse ``a+b*w`` syntax (``i`` is accepted for ``w`` in ring G)."""
        k = KElt.parse(text, ring)
        if k.den != 1:
            raise ValueError(f"{text!r} is not an element of {ring}")
        return k.num

    # -- basic protocol ---------------------------------------------------

    def __repr__(self) -> str:
        return f"RingElt({self.a}, {self.b}, {self.ring!r})"

    def __str__(self) -> str:
        return _format_pair(self.a, self.b)

    def __eq__(self, other) -> bool:
        if isinstance(other, RingElt):
            return self.a == other.a and self.b == other.b and self.ring is other.ring
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if isinstance(other, KElt):
            return other.den == 1 and other.num == self
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.ring.tag))

    def __lt__(self, other: RingElt) -> bool:
        return (self.a, self.b) < (other.a, other.b)

    def __le__(self, other: RingElt) -> bool:
        return (self.a, self.b) <= (other.a, other.b)

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    @property
    def coords(self) -> tuple[int, int]:
        return (self.a, self.b)

    def is_zero(self) -> bool:
        return not (self.a or self.b)

    # -- arithmetic -------------------------------------------------------

    def __neg__(self) -> RingElt:
        return RingElt(-self.a, -self.b, self.ring)

    def __add__(self, other) -> RingElt:
        if isinstance(other, KElt):
            return NotImplemented
        o = _coerce_ring(other, self.ring)
        return RingElt(self.a + o.a, self.b + o.b, self.ring)

    __radd__ = __add__

    def __sub__(self, other) -> RingElt:
        if isinstance(other, KElt):
            return NotImplemented
        o = _coerce_ring(other, self.ring)
        return RingElt(self.a - o.a, self.b - o.b, self.ring)

    def __rsub__(self, other) -> RingElt:
        return _coerce_ring(other, self.ring) - self

    def __mul__(self, other) -> RingElt:
        if isinstance(other, int):
            return RingElt(self.a * other, self.b * other, self.ring)
        if isinstance(other, KElt):
            return NotImplemented
        o = _coerce_ring(other, self.ring)
        r = self.ring
        bd = self.b * o.b
        return RingElt(
            self.a * o.a - r.n * bd,
            self.a * o.b + self.b * o.a + r.t * bd,
            r,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> KElt:
        return KElt.from_ring(self) / other

    def __rtruediv__(self, other) -> KElt:
        return KElt.coerce(other, self.ring) / self

    def __pow__(self, k: int) -> RingElt:
        if k < 0:
            raise ValueError("negative powers live in K; divide instead")
        out, base = self.ring.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> RingElt:
        return RingElt(self.a + self.ring.t * self.b, -self.b, self.ring)

    def norm(self) -> int:
        a, b, r = self.a, self.b, self.ring
        return a * a + r.t * a * b + r.n * b * b

    def is_unit(self) -> bool:
        return self.norm() == 1

    # -- geometry ---------------------------------------------------------

    @property
    def re(self) -> Fraction:
        return Fraction(2 * self.a + self.ring.t * self.b, 2)

    def im_sq(self) -> Fraction:
        """``Im(x)**2`` as an exact rational."""
        return Fraction(self.b * self.b * self.ring.im4, 4)

    def enclosure(self, bits: int = DEFAULT_START_BITS) -> ComplexInterval:
        re_ = RealInterval.from_ratio(2 * self.a + self.ring.t * self.b, 2, bits)
        im = RealInterval.sqrt_ratio(self.b * self.b * self.ring.im4, 4, bits)
        if self.b < 0:
            im = -im
        return ComplexInterval(re_, im)

    def __complex__(self) -> complex:
        return complex(float(self.re), math.copysign(math.sqrt(float(self.im_sq())), self.b))


def norm(x: RingElt) -> int:
    """``x * conj(x)`` as an exact integer."""
    return x.norm()


def _format_pair(a, b) -> str:
    if b == 0:
        return str(a)
    if b == 1:
        bw = "w"
    elif b == -1:
        bw = "-w"
    else:
        bw = f"{b}*w"
    if a == 0:
        return bw
    return f"{a}{bw}" if bw.startswith("-") else f"{a}+{bw}"


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(\*?\s*[wi])?")


class KElt:
    """Element ``num / den`` of the quotient field K, in lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num: RingElt, den: int = 1, _normalized: bool = False):
        if not _normalized:
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if den < 0:
                num, den = -num, -den
            g = math.gcd(num.a, num.b, den)
            if g != 1:
                num = RingElt(num.a // g, num.b // g, num.ring)
                den //= g
        self.num = num
        self.den = den

    @property
    def numerator(self) -> RingElt:
        return self.num

    @property
    def denominator(self) -> int:
        return self.den

    @property
    def ring(self) -> RingId:
        return self.num.ring

    @classmethod
    def from_ring(cls, x: RingElt) -> KElt:
        return cls(x, 1, _normalized=True)

    @classmethod
    def from_fraction(cls, q, ring: RingId) -> KElt:
        q = Fraction(q)
        return cls(RingElt(q.numerator, 0, ring), q.denominator, _normalized=True)

    @classmethod
    def from_coords(cls, a, b, ring: RingId) -> KElt:
        """``a + b*w`` with rational ``a``, ``b``."""
        a, b = Fraction(a), Fraction(b)
        den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        return cls(RingElt(int(a * den), int(b * den), ring), den)

    @classmethod
    def coerce(cls, x, ring: RingId) -> KElt:
        if isinstance(x, KElt):
            if x.ring is not ring:
                raise ValueError(f"mixing rings {x.ring} and {ring}")
            return x
        if isinstance(x, RingElt):
            if x.ring is not ring:
                raise ValueError(f"mixing rings {x.ring} and {ring}")
            return cls(x, 1, _normalized=True)
        if isinstance(x, (int, Fraction)):
            return cls.from_fraction(x, ring)
        raise TypeError(f"cannot coerce {x!r} into K({ring})")

    @classmethod
    def parse(cls, text: str, ring: RingId) -> KElt:
        """Parse ``a+b*w``, ``(a+b*w)/k`` or ``m/n``."""
        s = text.strip().replace(" ", "")
        den = 1
        m = re.fullmatch(r"\((.*)\)/(\d+)", s)
        if m:
            s, den = m.group(1), int(m.group(2))
        elif "/" in s:
            head, _, tail = s.rpartition("/")
            if not tail.isdigit():
                raise ValueError(f"cannot parse {text!r}")
            if re.fullmatch(r"[+-]?\d+", head):
                return cls.from_fraction(Fraction(int(head), int(tail)), ring)
            s, den = head, int(tail)
        if not s:
            raise ValueError("empty element")
        if "i" in s and ring is not RingId.G:
            raise ValueError("'i' is only an alias for w in ring G")
        a = b = 0
        pos = 0
        while pos < len(s):
            m = _TERM.match(s, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse {text!r}")
            sign, digits, unit = m.groups()
            if not digits and not unit:
                raise ValueError(f"cannot parse {text!r}")
            if pos > 0 and not sign:
                raise ValueError(f"cannot parse {text!r}")
            coef = int(digits) if digits else 1
            if sign == "-":
                coef = -coef
            if unit:
                b += coef
            else:
                a += coef
            pos = m.end()
        return cls(RingElt(a, b, ring), den)

    def __repr__(self) -> str:
        return f"KElt({self.num!r}, {self.den})"

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        if self.num.b == 0:
            return f"{self.num.a}/{self.den}"
        return f"({self.num})/{self.den}"

    def key(self) -> tuple[int, int, int]:
        return (self.num.a, self.num.b, self.den)

    def __eq__(self, other) -> bool:
        if isinstance(other, KElt):
            return self.den == other.den and self.num == other.num
        if isinstance(other, RingElt):
            return self.den == 1 and self.num == other
        if isinstance(other, int):
            return self.den == 1 and self.num.b == 0 and self.num.a == other
        if isinstance(other, Fraction):
            return self.num.b == 0 and Fraction(self.num.a, self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.den == 1:
            return hash(self.num)
        return hash((self.num.a, self.num.b, self.den, self.ring.tag))

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_integral(self) -> bool:
        return self.den == 1

    def is_real(self) -> bool:
        return self.num.b == 0

    def to_ring(self) -> RingElt:
        if self.den != 1:
            raise ValueError(f"{self} is not in the ring")
        return self.num

    def to_fraction(self) -> Fraction:
        if self.num.b:
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num.a, self.den)

    def __neg__(self) -> KElt:
        return KElt(-self.num, self.den, _normalized=True)

    def __add__(self, other) -> KElt:
        o = KElt.coerce(other, self.ring)
        if self.den == o.den:
            return KElt(self.num + o.num, self.den)
        return KElt(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> KElt:
        return self + (-KElt.coerce(other, self.ring))

    def __rsub__(self, other) -> KElt:
        return KElt.coerce(other, self.ring) - self

    def __mul__(self, other) -> KElt:
        if isinstance(other, int):
            return KElt(self.num * other, self.den)
        o = KElt.coerce(other, self.ring)
        return KElt(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> KElt:
        nrm = self.num.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero")
        return KElt(self.num.conj() * self.den, nrm)

    def __truediv__(self, other) -> KElt:
        o = KElt.coerce(other, self.ring)
        return self * o.inverse()

    def __rtruediv__(self, other) -> KElt:
        return KElt.coerce(other, self.ring) * self.inverse()

    def conj(self) -> KElt:
        return KElt(self.num.conj(), self.den, _normalized=True)

    def norm(self) -> Fraction:
        return Fraction(self.num.norm(), self.den * self.den)

    @property
    def re(self) -> Fraction:
        return Fraction(2 * self.num.a + self.ring.t * self.num.b, 2 * self.den)

    def im_sq(self) -> Fraction:
        return Fraction(self.num.b * self.num.b * self.ring.im4, 4 * self.den * self.den)

    @property
    def im_sign(self) -> int:
        return (self.num.b > 0) - (self.num.b < 0)

    def enclosure(self, bits: int = DEFAULT_START_BITS) -> ComplexInterval:
        a, b, den, r = self.num.a, self.num.b, self.den, self.ring
        re_ = RealInterval.from_ratio(2 * a + r.t * b, 2 * den, bits)
        im = RealInterval.sqrt_ratio(b * b * r.im4, 4 * den * den, bits)
        if b < 0:
            im = -im
        return ComplexInterval(re_, im)

    def __complex__(self) -> complex:
        return complex(self.num) / self.den


# ---------------------------------------------------------------------------
# Lattice geometry
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def units(ring: RingId) -> list[RingElt]:
    """The unit group, as pairs ``u, -u`` ordered by the argument of ``u``."""
    us = elements_of_norm(ring, 1)
    upper = [u for u in us if u.b > 0 or (u.b == 0 and u.a > 0)]
    upper.sort(key=lambda u: math.atan2(math.copysign(math.sqrt(float(u.im_sq())), u.b), float(u.re)))
    out: list[RingElt] = []
    for u in upper:
        out += [u, -u]
    return out


def elements_of_norm(ring: RingId, N: int) -> list[RingElt]:
    """Every element of norm ``N``, in lexicographic ``(a, b)`` order."""
    if N < 0:
        return []
    if N == 0:
        return [ring.zero()]
    # (2a + t b)**2 + im4 * b**2 = 4N
    out = []
    bmax = math.isqrt(4 * N // ring.im4)
    for b in range(-bmax, bmax + 1):
        s = 4 * N - ring.im4 * b * b
        if s < 0:
            continue
        r = math.isqrt(s)
        if r * r != s:
            continue
        for root in {r, -r}:
            twice_a = root - ring.t * b
            if twice_a % 2 == 0:
                out.append(RingElt(twice_a // 2, b, ring))
    out.sort()
    return out


@lru_cache(maxsize=None)
def covering_radius_sq(ring: RingId) -> Fraction:
    """Exact ``r0(ring)**2``: circumradius of the lattice triangle ``0, 1, w``."""
    a2 = Fraction(1)
    b2 = Fraction(ring.n)
    c2 = Fraction(1 - ring.t + ring.n)
    # the triangle must be non-obtuse for its circumradius to be the covering radius
    longest = max(a2, b2, c2)
    assert 2 * longest <= a2 + b2 + c2, "Delaunay triangle is obtuse"
    sixteen_area_sq = Fraction(ring.im4)
    return a2 * b2 * c2 / sixteen_area_sq


def covering_radius(ring: RingId, bits: int = 64) -> RealInterval:
    """Certified enclosure of ``r0(ring) = sup_z inf_g |z - g|``."""
    q = covering_radius_sq(ring)
    return RealInterval.sqrt_ratio(q.numerator, q.denominator, bits)


def lattice_points_near(ring: RingId, x: float, y: float, radius: float) -> list[RingElt]:
    """A superset of the ring elements within ``radius`` of ``x + iy``."""
    im_w = math.sqrt(ring.im4) / 2
    slack = 1e-9 * (1.0 + abs(x) + abs(y) + radius) + 1e-12
    r = radius + slack
    out = []
    for b in range(math.floor((y - r) / im_w), math.ceil((y + r) / im_w) + 1):
        dy = b * im_w - y
        if abs(dy) > r:
            continue
        span = math.sqrt(max(r * r - dy * dy, 0.0)) + slack
        cx = x - b * ring.t / 2
        for a in range(math.floor(cx - span), math.ceil(cx + span) + 1):
            out.append(RingElt(a, b, ring))
    out.sort()
    return out


def ring_gcd(x: RingElt, y: RingElt) -> RingElt:
    """A greatest common divisor by the Euclidean algorithm."""
    while not y.is_zero():
        q = _round_quotient(KElt.from_ring(x) / y)
        x, y = y, x - q * y
    return x


def _round_quotient(q: KElt) -> RingElt:
    ring = q.ring
    fa = Fraction(q.num.a, q.den)
    fb = Fraction(q.num.b, q.den)
    best = None
    for a in (math.floor(fa), math.ceil(fa)):
        for b in (math.floor(fb), math.ceil(fb)):
            g = RingElt(a, b, ring)
            d = (q - g).norm()
            if best is None or d < best[0]:
                best = (d, g)
    assert best is not None and best[0] < 1
    return best[1]


# ---------------------------------------------------------------------------
# Certified nearest / within queries
# ---------------------------------------------------------------------------


class Point(Protocol):
    """Anything that can be located in the plane to arbitrary precision.

    ``exact_dist_cmp(g, h)`` returns the exact sign of ``|v-g|**2 - |v-h|**2``
    and ``exact_abs2_cmp(g, c)`` the sign of ``|v-g|**2 - c``; both return
    ``None`` when no exact route exists.
    """

    refinable: bool

    def enclosure(self, bits: int) -> ComplexInterval: ...

    def exact_dist_cmp(self, g: RingElt, h: RingElt) -> int | None: ...

    def exact_abs2_cmp(self, g: RingElt, c: Fraction) -> int | None: ...


def _sign_r_plus_s_sqrt(r: Fraction, s: Fraction, m: Fraction) -> int:
    """Sign of ``r + s*sqrt(m)`` for rational ``r, s`` and ``m >= 0``."""
    sr = (r > 0) - (r < 0)
    ss = (s > 0) - (s < 0)
    if ss == 0 or m == 0:
        return sr
    if sr == 0 or sr == ss:
        return ss
    lhs, rhs = r * r, s * s * m
    if lhs == rhs:
        return 0
    return sr if lhs > rhs else ss


class _BoxPoint:
    """Point protocol for a bare enclosure, optionally with a refiner."""

    def __init__(self, box: ComplexInterval, refine: Callable[[int], ComplexInterval] | None = None):
        self.box = box
        self.refine = refine
        self.refinable = refine is not None

    def enclosure(self, bits: int) -> ComplexInterval:
        if self.refine is None:
            return self.box
        return self.refine(bits)

    def _dist2(self, g: RingElt) -> tuple[Fraction, Fraction]:
        # |v - g|**2 = r + s*sqrt(Im(w)**2) for a degenerate box v = x + iy
        x, y = self.box.re_lo, self.box.im_lo
        dx = x - g.re
        r = dx * dx + y * y + g.im_sq()
        s = -2 * y * g.b
        return r, s

    def exact_dist_cmp(self, g: RingElt, h: RingElt) -> int | None:
        if not self.box.is_point():
            return None
        r1, s1 = self._dist2(g)
        r2, s2 = self._dist2(h)
        return _sign_r_plus_s_sqrt(r1 - r2, s1 - s2, g.ring.im_omega_sq)

    def exact_abs2_cmp(self, g: RingElt, c: Fraction) -> int | None:
        if not self.box.is_point():
            return None
        r, s = self._dist2(g)
        return _sign_r_plus_s_sqrt(r - c, s, g.ring.im_omega_sq)


def _as_point(z, refine=None) -> Point:
    if isinstance(z, ComplexInterval):
        return _BoxPoint(z, refine)
    return z


def _half_diagonal(box: ComplexInterval) -> float:
    return math.hypot(float(box.re.width), float(box.im.width)) / 2


def nearest_elements(
    ring: RingId,
    z,
    *,
    refine: Callable[[int], ComplexInterval] | None = None,
    start_bits: int = DEFAULT_START_BITS,
    max_bits: int = DEFAULT_MAX_BITS,
) -> list[RingElt]:
    """All ring elements at minimal distance from the located point.

    ``z`` is a :class:`ComplexInterval` (optionally refined through
    ``refine(bits)``) or any object following the :class:`Point` protocol.
    Ties come back in lexicographic ``(a, b)`` order.
    """
    point = _as_point(z, refine)
    bits = start_bits
    box = point.enclosure(bits)
    mid = box.mid
    r0 = float(covering_radius(ring).upper)
    cands = lattice_points_near(ring, mid.real, mid.imag, r0 + _half_diagonal(box))
    while True:
        d2 = [(box - g.enclosure(box.bits)).abs2() for g in cands]
        best_hi = min(d.hi for d in d2)
        cands = [g for g, d in zip(cands, d2) if d.lo <= best_hi]
        if len(cands) == 1:
            return cands
        exact = point.exact_dist_cmp(cands[0], cands[1])
        if exact is not None:
            return _exact_minimum(point, cands)
        if not point.refinable or bits >= max_bits:
            raise AmbiguousTie(f"cannot separate {[str(g) for g in cands]} at {bits} bits")
        bits *= 2
        box = point.enclosure(bits)


def _exact_minimum(point: Point, cands: list[RingElt]) -> list[RingElt]:
    best = [cands[0]]
    for g in cands[1:]:
        s = point.exact_dist_cmp(g, best[0])
        if s < 0:
            best = [g]
        elif s == 0:
            best.append(g)
    return sorted(best)


def elements_within(
    ring: RingId,
    z,
    r,
    *,
    refine: Callable[[int], ComplexInterval] | None = None,
    start_bits: int = DEFAULT_START_BITS,
    max_bits: int = DEFAULT_MAX_BITS,
) -> list[RingElt]:
    """All ring elements at certified distance ``< r`` from the point.

    An element is dropped when the point is certified to coincide with it.
    """
    r = Fraction(r)
    if not 0 < r <= 1:
        raise ValueError("radius must satisfy 0 < r <= 1")
    r2 = r * r
    point = _as_point(z, refine)
    bits = start_bits
    box = point.enclosure(bits)
    mid = box.mid
    pending = lattice_points_near(ring, mid.real, mid.imag, float(r) + _half_diagonal(box))
    inside: list[RingElt] = []
    while pending:
        undecided = []
        for g in pending:
            d2 = (box - g.enclosure(box.bits)).abs2()
            if d2.certainly_lt(r2):
                if not (d2.lo <= 0 and point.exact_abs2_cmp(g, Fraction(0)) == 0):
                    inside.append(g)
            elif d2.lower >= r2:
                continue
            else:
                undecided.append(g)
        pending = []
        for g in undecided:
            s = point.exact_abs2_cmp(g, r2)
            if s is None:
                pending.append(g)
            elif s < 0 and point.exact_abs2_cmp(g, Fraction(0)) != 0:
                inside.append(g)
        if pending:
            if not point.refinable or bits >= max_bits:
                raise AmbiguousBoundary(
                    f"{[str(g) for g in pending]} undecided against radius {r} at {bits} bits"
                )
            bits *= 2
            box = point.enclosure(bits)
    return sorted(inside)


def iter_ring_box(ring: RingId, bound: int) -> Iterable[RingElt]:
    """Every element with both coordinates in ``[-bound, bound]``."""
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            yield RingElt(a, b, ring)
