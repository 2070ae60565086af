"""Quadratic and Hermitian binary forms and their orbits along expansions.

A form is stored as its 2x2 matrix ``[[A, B], [C, D]]`` with entries in K
and a flag ``sigma`` saying whether the first argument is conjugated:

    f(xi, eta) = A xi^s xi + B xi^s eta + C eta^s xi + D eta^s eta

Moving along an expansion replaces ``X`` by ``(g^t)^s X g`` with ``g`` the
convergent matrix ``[[p_n, p_{n-1}], [q_n, q_{n-1}]]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .algebraic import AlgebraicValue, SurdSpec, SurdState
from .errors import DegenerateForm, NotAZero
from .expansion import Expansion
from .intervals import ComplexInterval, RealInterval
from .rings import KElt, RingElt, RingId

__all__ = [
    "Sigma",
    "FormMatrix",
    "Circle",
    "Line",
    "Point",
    "Empty",
    "OrbitReport",
    "eval_form",
    "transform",
    "orbit",
    "classify_zero_set",
    "surd_to_form",
    "entry_bound",
    "hermitian_quotient_bound",
    "neat_radius",
]


class Sigma(enum.Enum):
    IDENTITY = "identity"
    CONJUGATION = "conjugation"

    def apply(self, x):
        return x if self is Sigma.IDENTITY else x.conj()


def _lcm_den(entries: Iterable[KElt]) -> int:
    k = 1
    for e in entries:
        k = k * e.den // math.gcd(k, e.den)
    return k


class FormMatrix:
    """A sigma-symmetric 2x2 matrix with entries in ``k^-1 * ring``."""

    __slots__ = ("A", "B", "C", "D", "sigma", "k")

    def __init__(self, A, B, C, D, sigma: Sigma = Sigma.IDENTITY, k: int | None = None, ring: RingId | None = None):
        if ring is None:
            ring = next((x.ring for x in (A, B, C, D) if isinstance(x, (RingElt, KElt))), RingId.G)
        self.A, self.B, self.C, self.D = (KElt.coerce(x, ring) for x in (A, B, C, D))
        self.sigma = sigma
        need = _lcm_den(self.entries)
        if k is None:
            k = need
        if k < 1 or k % need:
            raise ValueError(f"entries are not in (1/{k}){ring}")
        self.k = k
        if self.C != sigma.apply(self.B):
            raise ValueError("matrix is not sigma-symmetric")
        if sigma is Sigma.CONJUGATION and not (self.A.is_real() and self.D.is_real()):
            raise ValueError("Hermitian matrix needs real diagonal entries")

    @classmethod
    def parse(cls, text: str, ring: RingId) -> FormMatrix:
        """``hermitian:A,B,C,D`` or ``quadratic:A,B,C,D``."""
        kind, _, rest = text.partition(":")
        sigma = {"hermitian": Sigma.CONJUGATION, "quadratic": Sigma.IDENTITY}.get(kind.strip().lower())
        parts = [p.strip() for p in rest.split(",")]
        if sigma is None or len(parts) != 4:
            raise ValueError(f"cannot parse form {text!r}")
        return cls(*(KElt.parse(p, ring) for p in parts), sigma=sigma, ring=ring)

    @property
    def ring(self) -> RingId:
        return self.A.ring

    @property
    def entries(self) -> tuple[KElt, KElt, KElt, KElt]:
        return (self.A, self.B, self.C, self.D)

    def det(self) -> KElt:
        return self.A * self.D - self.B * self.C

    def key(self) -> tuple:
        return (self.sigma.value, self.k) + tuple(e.key() for e in self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormMatrix):
            return NotImplemented
        return self.sigma is other.sigma and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.sigma, self.entries))

    def __repr__(self) -> str:
        tag = "hermitian" if self.sigma is Sigma.CONJUGATION else "quadratic"
        return f"FormMatrix({tag}: [[{self.A}, {self.B}], [{self.C}, {self.D}]])"

    def max_abs_sq(self) -> Fraction:
        return max(e.norm() for e in self.entries)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

Value = Union[int, Fraction, RingElt, KElt, SurdState, ComplexInterval]


def _lift(x, ring: RingId, base: SurdSpec | None, bits: int):
    if isinstance(x, ComplexInterval):
        return x
    if isinstance(x, SurdState):
        return x.value.to_value()
    k = KElt.coerce(x, ring)
    return AlgebraicValue.constant(k, base) if base is not None else k


def eval_form(X: FormMatrix, xi: Value, eta: Value, *, bits: int = 128):
    """The form's value at ``(xi, eta)``.

    Exact inputs give an exact result: a :class:`KElt` for field elements, an
    :class:`AlgebraicValue` once a surd state is involved.  Any enclosure
    among the inputs makes the result an enclosure.
    """
    ring = X.ring
    args = (xi, eta)
    if any(isinstance(v, ComplexInterval) for v in args):
        vals = [v if isinstance(v, ComplexInterval) else _enclose(v, ring, bits) for v in args]
        ent = [e.enclosure(bits) for e in X.entries]
    else:
        bases = {v.base for v in args if isinstance(v, SurdState)}
        if len(bases) > 1:
            raise ValueError("surd arguments must share a base")
        base = bases.pop() if bases else None
        vals = [_lift(v, ring, base, bits) for v in args]
        ent = list(X.entries)
    x, y = vals
    s = X.sigma
    xs, ys = (x, y) if s is Sigma.IDENTITY else (x.conj(), y.conj())
    A, B, C, D = ent
    return xs * x * A + xs * y * B + ys * x * C + ys * y * D


def _enclose(v, ring: RingId, bits: int) -> ComplexInterval:
    if isinstance(v, SurdState):
        return v.enclosure(bits)
    return KElt.coerce(v, ring).enclosure(bits)


def _is_zero(value) -> bool:
    if isinstance(value, ComplexInterval):
        return value.contains_zero()
    return value.is_zero()


# ---------------------------------------------------------------------------
# Transformation and orbits
# ---------------------------------------------------------------------------


def _mat(g) -> tuple:
    if len(g) == 2:
        g = (g[0][0], g[0][1], g[1][0], g[1][1])
    return tuple(g)


def transform(X: FormMatrix, g) -> FormMatrix:
    """``(g^t)^sigma X g`` for a unimodular ``g`` over the ring."""
    ring = X.ring
    g11, g12, g21, g22 = (KElt.coerce(x, ring) for x in _mat(g))
    det = g11 * g22 - g12 * g21
    if not (det == 1 or det == -1):
        raise ValueError(f"matrix determinant {det} is not +-1")
    s = X.sigma
    h11, h12, h21, h22 = s.apply(g11), s.apply(g21), s.apply(g12), s.apply(g22)
    A, B, C, D = X.entries
    # X g
    m11, m12 = A * g11 + B * g21, A * g12 + B * g22
    m21, m22 = C * g11 + D * g21, C * g12 + D * g22
    return FormMatrix(
        h11 * m11 + h12 * m21,
        h11 * m12 + h12 * m22,
        h21 * m11 + h22 * m21,
        h21 * m12 + h22 * m22,
        sigma=s,
        k=X.k,
    )


def _step_transform(X: FormMatrix, a: KElt) -> FormMatrix:
    """``(M^t)^sigma X M`` for ``M = [[a, 1], [1, 0]]``."""
    A, B, C, D = X.entries
    ac = X.sigma.apply(a)
    # X M = [[A a + B, A], [C a + D, C]]
    m11, m21 = A * a + B, C * a + D
    return FormMatrix(ac * m11 + m21, ac * A + C, m11, A, sigma=X.sigma, k=X.k)


@dataclass
class OrbitReport:
    distinct: list[FormMatrix] = field(default_factory=list)
    stabilization_index: int = 0
    per_index: dict[int, int] = field(default_factory=dict)
    zero_convergents: list[int] = field(default_factory=list)

    def ids_up_to(self, n: int) -> set[int]:
        return {i for m, i in self.per_index.items() if m <= n}

    def new_after(self, n: int) -> list[int]:
        """Indices beyond ``n`` at which a matrix first appeared."""
        seen = self.ids_up_to(n)
        out = []
        for m in sorted(self.per_index):
            i = self.per_index[m]
            if m > n and i not in seen:
                seen.add(i)
                out.append(m)
        return out


def _check_zero(X: FormMatrix, e: Expansion) -> None:
    z = e.steps[0].state
    value = eval_form(X, z, 1)
    if not value.is_zero():
        raise NotAZero("the expanded number is not a zero of the form")


def orbit(X: FormMatrix, e: Expansion, N: Sequence[int], *, cross_check: int | None = 200) -> OrbitReport:
    """Distinct matrices ``(g_n^t)^sigma X g_n`` over the indices ``N``.

    The first ``cross_check`` indices of ``N`` (all when ``None``) are compared
    against ``A_n = f(p_n, q_n)`` and ``D_n = f(p_{n-1}, q_{n-1})``.
    """
    _check_zero(X, e)
    wanted = set(N)
    report = OrbitReport()
    if not wanted:
        return report
    last = max(wanted)
    if last > e.depth:
        raise ValueError(f"index {last} beyond expansion depth {e.depth}")
    index: dict[tuple, int] = {}
    Xn = X
    checked = 0
    for rec in e.steps[: last + 1]:
        Xn = _step_transform(Xn, KElt.from_ring(rec.a))
        n = rec.n
        if n not in wanted:
            continue
        if cross_check is None or checked < cross_check:
            if Xn.A != eval_form(X, rec.p, rec.q) or Xn.D != eval_form(X, rec.p_prev, rec.q_prev):
                raise AssertionError(f"orbit matrix disagrees with the convergent identity at {n}")
            checked += 1
        if Xn.A.is_zero():
            report.zero_convergents.append(n)
        key = Xn.key()
        i = index.get(key)
        if i is None:
            i = index[key] = len(report.distinct)
            report.distinct.append(Xn)
            report.stabilization_index = n
        report.per_index[n] = i
    return report


def neat_radius(e: Expansion, den: int = 1000) -> Fraction:
    """A rational ``r < 1`` at or above every ``|z_n - a_n|``, ``n >= 1``."""
    hi = e.radius_so_far.upper
    r = Fraction(math.floor(hi * den) + 1, den)
    if r >= 1:
        raise ValueError("expansion radius is too close to 1 for a uniform bound")
    return r


# ---------------------------------------------------------------------------
# Zero sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Circle:
    center: KElt
    radius_sq: Fraction


@dataclass(frozen=True)
class Line:
    """The line ``2 Re(conj(b) z) + c = 0``."""

    b: KElt
    c: Fraction


@dataclass(frozen=True)
class Point:
    center: KElt


@dataclass(frozen=True)
class Empty:
    pass


def classify_zero_set(X: FormMatrix) -> Circle | Line | Point | Empty:
    """The set of ``z`` with ``f(z, 1) = 0`` for a Hermitian form."""
    if X.sigma is not Sigma.CONJUGATION:
        raise ValueError("zero-set classification needs a Hermitian form")
    a, b, c = X.A.to_fraction(), X.B, X.D.to_fraction()
    if a == 0 and b.is_zero() and c == 0:
        raise DegenerateForm("the zero form vanishes everywhere")
    if a != 0:
        # a|z|^2 + b conj(z) + conj(b) z + c = a|z + b/a|^2 - |b|^2/a + c
        center = -b / a
        r2 = (b.norm() - a * c) / (a * a)
        if r2 > 0:
            return Circle(center, r2)
        if r2 == 0:
            return Point(center)
        return Empty()
    if not b.is_zero():
        return Line(b, c)
    return Empty()


def surd_to_form(z: SurdSpec) -> FormMatrix:
    """The symmetric form ``[[A, B/2], [B/2, C]]`` vanishing at ``(z, 1)``."""
    ring = z.ring
    half_b = KElt.from_ring(z.B) / 2
    return FormMatrix(z.A, half_b, half_b, z.C, sigma=Sigma.IDENTITY, ring=ring)


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------


def _abs_upper(x: KElt, bits: int) -> RealInterval:
    n = x.norm()
    return RealInterval.sqrt_ratio(n.numerator, n.denominator, bits)


def entry_bound(X: FormMatrix, z_enclosure: ComplexInterval, M, *, symmetric: bool = False, bits: int = 64) -> Fraction:
    """Upper bound for every entry of the orbit matrices over a neat index set.

    ``M`` bounds ``|delta_n|`` on the index set, so ``|delta_{n-1}| <= M + 1``
    there.  The bound on ``D_n`` carries the coefficient ``|A z|`` on the
    squared term; ``symmetric=True`` uses ``|A|`` as for ``A_n``.
    """
    if isinstance(M, RealInterval):
        M = M.upper
    M = RealInterval.exact(Fraction(M), bits)
    if M.lower < 0:
        raise ValueError("M must be nonnegative")
    A, B, C, _ = (_abs_upper(e, bits) for e in X.entries)
    absz = abs(z_enclosure.to_bits(bits))
    lin = 2 * A * absz + B + C
    bound_a = lin * M + A * M.square()
    M1 = M + 1
    quad = A if symmetric else A * absz
    bound_d = lin * M1 + quad * M1.square()
    det = _abs_upper(X.det(), bits)
    bound_b = (bound_a * bound_d + det).sqrt()
    out = max(bound_a.upper, bound_d.upper, bound_b.upper)
    for e in X.entries:
        out = max(out, _abs_upper(e, bits).upper)
    return out


def hermitian_quotient_bound(X: FormMatrix, E) -> Fraction:
    """Bound on ``|a_{n+1}|`` when every entry of ``X_n`` is at most ``E``.

    ``z_{n+1}`` lies on the circle of ``X_n``, whose centre is ``-B_n/A_n``
    and whose radius is ``sqrt|det X| / |A_n|``; ``|A_n| >= 1/k`` unless the
    convergent itself lies on the circle.
    """
    if X.sigma is not Sigma.CONJUGATION:
        raise ValueError("the bound applies to Hermitian forms")
    d = abs(X.det().to_fraction())
    root = RealInterval.sqrt_ratio(d.numerator, d.denominator, 64).upper
    return X.k * (Fraction(E) + root) + 1
