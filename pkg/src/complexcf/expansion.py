"""Continued-fraction expansions over the five Euclidean rings.

An expansion runs ``z_{n+1} = 1 / (z_n - a_n)`` with ``0 < |z_n - a_n| < 1``
certified at each step.  The partial quotients ``a_n`` come from a chooser.
Alongside the states we keep the convergent numerators and denominators
``p_n, q_n`` and the relative errors ``q_n (q_n z - p_n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterator, Mapping, Protocol, Sequence

from .algebraic import (
    Cmp,
    SurdSpec,
    SurdState,
    cmp_abs2,
    make_surd,
    states_equal,
    step_state,
)
from .errors import ChooserFailed, InvalidExpansion, ReducibleOverK
from .intervals import ComplexInterval, RealInterval
from .rings import (
    DEFAULT_START_BITS,
    RingElt,
    RingId,
    covering_radius,
    elements_within,
    nearest_elements,
    units,
)

__all__ = [
    "Chooser",
    "NearestInteger",
    "FarthestWithin",
    "NearestEven",
    "Script",
    "Composite",
    "StepRecord",
    "Expansion",
    "CycleReport",
    "power_substitution",
    "substituted_sqrt2_chooser",
    "step",
    "iterate",
    "expand",
    "relative_errors",
    "identity_residual",
    "neat_indices",
    "mono_criterion",
    "q_norms_increase",
    "detect_cycle",
    "recurrence_indices",
    "periodic_to_surd",
    "approx_quality",
]


# ---------------------------------------------------------------------------
# Choosers
# ---------------------------------------------------------------------------


class Chooser(Protocol):
    def choose(self, state: SurdState, n: int) -> RingElt: ...

    def phase(self, n: int) -> Hashable:
        """Part of the iteration state owned by the chooser at index ``n``.

        Two indices with equal states and equal phases continue identically.
        """
        ...

    def validate(self, ring: RingId) -> None: ...

    def describe(self) -> dict: ...


@dataclass(frozen=True)
class NearestInteger:
    """The nearest ring element; ties go to the lexicographically least."""

    def choose(self, state: SurdState, n: int) -> RingElt:
        return nearest_elements(state.ring, state)[0]

    def phase(self, n: int) -> Hashable:
        return None

    def validate(self, ring: RingId) -> None:
        pass

    def describe(self) -> dict:
        return {"kind": "nearest"}


@dataclass(frozen=True)
class FarthestWithin:
    """The farthest ring element at distance ``< r``.

    Needs ``r0 < r < 1`` so that a candidate always exists.  Exact ties go to
    the lexicographically least element.
    """

    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        if not 0 < self.r < 1:
            raise ValueError("radius must lie in (0, 1)")

    def validate(self, ring: RingId) -> None:
        if not covering_radius(ring).upper < self.r:
            raise ValueError(f"radius {self.r} does not exceed the covering radius of {ring}")

    def choose(self, state: SurdState, n: int) -> RingElt:
        cands = elements_within(state.ring, state, self.r)
        if not cands:
            raise ChooserFailed(f"no ring element within {self.r} at index {n}")
        best = cands[0]
        for g in cands[1:]:
            if state.exact_dist_cmp(g, best) > 0:
                best = g
        return best

    def phase(self, n: int) -> Hashable:
        return None

    def describe(self) -> dict:
        return {"kind": "farthest", "r": str(self.r)}


@dataclass(frozen=True)
class NearestEven:
    """Nearest element of ``(1+i)Z[i]`` (experimental, Gaussian ring only).

    No invariant is claimed for this chooser.  It fails when the nearest even
    element is at distance one or more.
    """

    experimental: bool = False

    def validate(self, ring: RingId) -> None:
        if not self.experimental:
            raise ValueError("NearestEven is experimental; pass experimental=True")
        if ring is not RingId.G:
            raise ValueError("NearestEven is defined for the Gaussian integers only")

    def choose(self, state: SurdState, n: int) -> RingElt:
        cands = [g for g in elements_within(state.ring, state, 1) if (g.a + g.b) % 2 == 0]
        if not cands:
            raise ChooserFailed(f"no even Gaussian integer within distance 1 at index {n}")
        best = cands[0]
        for g in cands[1:]:
            if state.exact_dist_cmp(g, best) < 0:
                best = g
        return best

    def phase(self, n: int) -> Hashable:
        return None

    def describe(self) -> dict:
        return {"kind": "nearest-even"}


@dataclass(frozen=True)
class Script:
    """Hand-specified partial quotients, optionally continued by a repeating block."""

    entries: tuple = ()
    period: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "period", tuple(self.period))

    def validate(self, ring: RingId) -> None:
        for g in self.entries + self.period:
            if isinstance(g, RingElt) and g.ring is not ring:
                raise ValueError(f"script entry {g} is not in {ring}")

    def entry(self, n: int) -> RingElt:
        if n < len(self.entries):
            return self.entries[n]
        if not self.period:
            raise ChooserFailed(f"script exhausted at index {n}")
        return self.period[(n - len(self.entries)) % len(self.period)]

    def choose(self, state: SurdState, n: int) -> RingElt:
        return self.entry(n)

    def phase(self, n: int) -> Hashable:
        if n < len(self.entries):
            return ("script", n)
        return ("period", (n - len(self.entries)) % max(len(self.period), 1))

    def describe(self) -> dict:
        return {
            "kind": "script",
            "entries": [str(g) for g in self.entries],
            "period": [str(g) for g in self.period],
        }


@dataclass(frozen=True)
class Composite:
    """A primary chooser with forced entries at some indices.

    ``overrides`` is either a mapping ``index -> element`` or a callable
    returning the forced element (or ``None``) for an index.  With a callable
    no index is ever treated as equivalent to another, since the override
    pattern is unknown.
    """

    primary: Chooser
    overrides: Mapping[int, RingElt] | Callable[[int], RingElt | None] = field(default_factory=dict)
    label: str = ""

    def _forced(self, n: int) -> RingElt | None:
        if callable(self.overrides):
            return self.overrides(n)
        return self.overrides.get(n)

    def validate(self, ring: RingId) -> None:
        self.primary.validate(ring)

    def choose(self, state: SurdState, n: int) -> RingElt:
        g = self._forced(n)
        return self.primary.choose(state, n) if g is None else g

    def phase(self, n: int) -> Hashable:
        if callable(self.overrides) or (self.overrides and n <= max(self.overrides)):
            return ("composite", n)
        return self.primary.phase(n)

    def describe(self) -> dict:
        out = {"kind": "composite", "primary": self.primary.describe()}
        if callable(self.overrides):
            out["overrides"] = self.label or "callable"
        else:
            out["overrides"] = {str(k): str(v) for k, v in sorted(self.overrides.items())}
        return out


def power_substitution(start: int = 4, triple=(3, -2, 3)) -> Callable[[int], int | None]:
    """Overrides placing ``triple`` at ``m, m+1, m+2`` for ``m = start**k``, ``k >= 1``."""

    def forced(n: int) -> int | None:
        m = start
        while m <= n:
            if n - m < len(triple):
                return triple[n - m]
            m *= start
        return None

    return forced


def substituted_sqrt2_chooser(start: int = 4) -> Composite:
    """Nearest-integer chooser with ``(3, -2, 3)`` forced at indices ``start**k``."""
    forced = power_substitution(start)

    def overrides(n: int) -> RingElt | None:
        v = forced(n)
        return None if v is None else RingElt(v, 0, RingId.G)

    return Composite(NearestInteger(), overrides, label=f"(3,-2,3) at {start}^k")


# ---------------------------------------------------------------------------
# Stepping
# ---------------------------------------------------------------------------


def step(s: SurdState, chooser: Chooser, n: int = 0) -> tuple[RingElt, SurdState]:
    """One iteration: choose ``a`` with ``0 < |v - a| < 1`` and move to ``1/(v - a)``."""
    a = chooser.choose(s, n)
    if not isinstance(a, RingElt):
        a = RingElt(int(a), 0, s.ring)
    if cmp_abs2(s, a, 1) is not Cmp.LESS:
        raise ChooserFailed(f"partial quotient {a} at index {n} is not within distance 1")
    # the state is never in K, so |v - a| > 0 holds automatically
    return a, step_state(s, a)


def iterate(z: SurdSpec | SurdState, chooser: Chooser) -> Iterator[tuple[int, SurdState, RingElt]]:
    """Yield ``(n, z_n, a_n)`` indefinitely."""
    state = z.root() if isinstance(z, SurdSpec) else z
    chooser.validate(state.ring)
    n = 0
    while True:
        a, nxt = step(state, chooser, n)
        yield n, state, a
        state = nxt
        n += 1


# ---------------------------------------------------------------------------
# Expansions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepRecord:
    n: int
    a: RingElt
    state: SurdState
    p: RingElt
    q: RingElt
    p_prev: RingElt
    q_prev: RingElt
    delta: ComplexInterval
    dist: RealInterval
    q_mono: bool

    @property
    def g(self) -> tuple[tuple[RingElt, RingElt], tuple[RingElt, RingElt]]:
        return ((self.p, self.p_prev), (self.q, self.q_prev))

    @property
    def det(self) -> int:
        d = self.p * self.q_prev - self.p_prev * self.q
        assert d.b == 0
        return d.a


@dataclass(frozen=True)
class Expansion:
    ring: RingId
    z0: SurdSpec
    chooser: Chooser
    steps: tuple[StepRecord, ...]
    next_state: SurdState
    radius_so_far: RealInterval | None

    @property
    def depth(self) -> int:
        return len(self.steps) - 1

    @property
    def partial_quotients(self) -> list[RingElt]:
        return [r.a for r in self.steps]

    def states(self) -> list[SurdState]:
        """``z_0 .. z_{depth+1}``."""
        return [r.state for r in self.steps] + [self.next_state]

    def __getitem__(self, n: int) -> StepRecord:
        return self.steps[n]

    def __len__(self) -> int:
        return len(self.steps)


_OMEGA_SLACK: dict[int, ComplexInterval] = {}


def _truncated_enclosure(x: RingElt, shift: int, bits: int) -> ComplexInterval:
    """Enclosure of ``x / 2**shift`` from the top bits of its coordinates."""
    if shift <= 0:
        return x.enclosure(bits)
    ring = x.ring
    head = RingElt(x.a >> shift, x.b >> shift, ring).enclosure(bits)
    # dropped low bits contribute [0, 1) + [0, 1)*w
    slack = ComplexInterval.from_bounds(0, 1 + Fraction(ring.t, 2), 0, 2, bits)
    return head + slack


def _ratio_enclosure(num: RingElt, den: RingElt, bits: int) -> ComplexInterval:
    """Enclosure of ``num / den`` using only the leading bits of both."""
    size = max(abs(den.a).bit_length(), abs(den.b).bit_length())
    shift = size - (bits + 16)
    return _truncated_enclosure(num, shift, bits) / _truncated_enclosure(den, shift, bits)


def _delta_enclosure(n: int, z_next: SurdState, q: RingElt, q_prev: RingElt, bits: int) -> ComplexInterval:
    # q_n(q_n z - p_n) = (-1)^n / (z_{n+1} + q_{n-1}/q_n)
    rho = _ratio_enclosure(q_prev, q, bits)
    d = 1 / (z_next.enclosure(bits) + rho)
    return d if n % 2 == 0 else -d


_MERSENNE = (1 << 61) - 1
EXACT_DET_INDICES = 1000


def _det_mod(p: RingElt, q: RingElt, p1: RingElt, q1: RingElt) -> RingElt:
    ring, m = p.ring, _MERSENNE
    r = [RingElt(x.a % m, x.b % m, ring) for x in (p, q, p1, q1)]
    d = r[0] * r[3] - r[2] * r[1]
    return RingElt(d.a % m, d.b % m, ring)


def _check_det(n: int, p: RingElt, q: RingElt, p1: RingElt, q1: RingElt, exact: bool) -> None:
    want = 1 if n % 2 else -1
    if exact:
        det = p * q1 - p1 * q
        ok = det == want
    else:
        det = _det_mod(p, q, p1, q1)
        ok = det.b == 0 and det.a == want % _MERSENNE
    if not ok:
        raise AssertionError(f"determinant {det} at index {n}")


def expand(z: SurdSpec, chooser: Chooser, n_max: int, *, bits: int = DEFAULT_START_BITS) -> Expansion:
    """Expand ``z`` to indices ``0..n_max`` with every invariant checked on the way.

    The determinant of ``g_n`` is compared exactly for the first
    ``EXACT_DET_INDICES`` indices and the last one, and modulo a large prime
    in between; ``StepRecord.det`` recomputes it exactly on demand.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    ring = z.ring
    one, zero = ring.one(), ring.zero()
    p2, q2 = zero, one  # p_{n-2}, q_{n-2}, seeded so the recurrence yields p_0 = a_0, q_0 = 1
    p1, q1 = one, zero  # p_{-1}, q_{-1}
    norm1 = 0
    records = []
    radius: RealInterval | None = None
    for n, state, a in iterate(z, chooser):
        p, q = a * p1 + p2, a * q1 + q2
        _check_det(n, p, q, p1, q1, n < EXACT_DET_INDICES or n == n_max)
        dist = abs(state.enclosure(bits) - a.enclosure(bits))
        if n >= 1:
            radius = dist if radius is None else radius.max(dist)
        norm = q.norm()
        records.append((n, a, state, p, q, p1, q1, dist, norm1 <= norm))
        p2, q2, p1, q1, norm1 = p1, q1, p, q, norm
        if n == n_max:
            break
    nxt = step_state(records[-1][2], records[-1][1])
    states = [r[2] for r in records] + [nxt]
    steps = []
    for n, a, state, p, q, pp, qp, dist, mono in records:
        delta = _delta_enclosure(n, states[n + 1], q, qp, bits)
        steps.append(StepRecord(n, a, state, p, q, pp, qp, delta, dist, mono))
    return Expansion(ring, z, chooser, tuple(steps), nxt, radius)


def relative_errors(e: Expansion, *, cross_check: int = 100) -> list[ComplexInterval]:
    """Enclosures of ``q_n (q_n z - p_n)``.

    For ``n < cross_check`` each value is compared against
    ``(-1)^n q_n / (z_1 ... z_{n+1})``; disagreement raises ``AssertionError``.
    """
    out = [r.delta for r in e.steps]
    bits = e.steps[0].delta.bits
    prod = None
    states = e.states()
    for n in range(min(cross_check, len(out))):
        zn1 = states[n + 1].enclosure(bits)
        prod = zn1 if prod is None else prod * zn1
        q = e.steps[n].q.enclosure(bits)
        other = q / prod
        if n % 2:
            other = -other
        if not other.overlaps(out[n]):
            raise AssertionError(f"relative error cross-check failed at index {n}")
    return out


def identity_residual(e: Expansion, n: int, bits: int = 256) -> RealInterval:
    """Enclosure of ``|(q_n z - p_n) z_1 ... z_{n+1}| - 1`` (exactly zero).

    ``q_n z - p_n`` cancels about twice the bit size of ``q_n``, so the
    working precision is raised by that much on top of ``bits``.
    """
    states = e.states()
    r = e.steps[n]
    bits += 2 * max(abs(r.q.a).bit_length(), abs(r.q.b).bit_length())
    diff = r.q.enclosure(bits) * states[0].enclosure(bits) - r.p.enclosure(bits)
    for k in range(1, n + 2):
        diff = diff * states[k].enclosure(bits)
    return abs(diff) - 1


def neat_indices(e: Expansion, r) -> list[int]:
    """Indices ``n >= 1`` with ``|z_n - a_n| <= r`` and ``|q_{n-1}| <= |q_n|``."""
    r = Fraction(r)
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    r2 = r * r
    out = []
    for rec in e.steps[1:]:
        if not rec.q_mono:
            continue
        if cmp_abs2(rec.state, rec.a, r2) is not Cmp.GREATER:
            out.append(rec.n)
    return out


def mono_criterion(a: Sequence[RingElt]) -> bool:
    """The sufficient condition for ``|q_n|`` to increase strictly.

    ``a`` lists ``a_1, a_2, ...``; the leading quotient ``a_0`` plays no role.
    """
    for x in a:
        if x.norm() <= 1:
            return False
    for x, y in zip(a, a[1:]):
        ny = y.norm()
        if ny == 2 and (x + y.conj()).norm() < 4:
            return False
        if ny == 3 and (2 * x + y.conj()).norm() < 9:
            return False
    return True


def q_norms_increase(a: Sequence[RingElt]) -> bool:
    """Whether ``norm(q_{n-1}) < norm(q_n)`` for all ``n >= 1`` given ``a_1, a_2, ...``."""
    if not a:
        return True
    ring = a[0].ring
    q2, q1 = ring.zero(), ring.one()
    n1 = 1
    for x in a:
        q = x * q1 + q2
        nq = q.norm()
        if nq <= n1:
            return False
        q2, q1, n1 = q1, q, nq
    return True


# ---------------------------------------------------------------------------
# Periodicity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CycleReport:
    preperiod: int
    period: int
    witness: tuple[int, int]
    partial_quotients: tuple[RingElt, ...] = ()

    @property
    def preperiod_quotients(self) -> tuple[RingElt, ...]:
        return self.partial_quotients[: self.preperiod]

    @property
    def period_quotients(self) -> tuple[RingElt, ...]:
        return self.partial_quotients[self.preperiod : self.preperiod + self.period]


def detect_cycle(z: SurdSpec, chooser: Chooser, n_max: int) -> CycleReport | None:
    """First exact repeat ``z_{n0} = z_{n0+k}`` with matching chooser phase, if any.

    States are indexed by their exact coordinates; every hit is confirmed
    by ``states_equal``.
    """
    seen: dict[tuple, list[tuple[int, SurdState]]] = {}
    quotients: list[RingElt] = []
    for n, state, a in iterate(z, chooser):
        key = (state.key(), chooser.phase(n))
        for m, old in seen.get(key, ()):
            if states_equal(old, state):
                return CycleReport(m, n - m, (m, n), tuple(quotients))
        seen.setdefault(key, []).append((n, state))
        quotients.append(a)
        if n >= n_max:
            return None
    return None


def recurrence_indices(e: Expansion, target: SurdState) -> list[int]:
    """All ``n`` with ``z_n`` exactly equal to ``target``."""
    return [r.n for r in e.steps if states_equal(r.state, target)]


def _mat_prod(quotients: Sequence[RingElt], ring: RingId) -> tuple:
    one, zero = ring.one(), ring.zero()
    m = (one, zero, zero, one)
    for b in quotients:
        a11, a12, a21, a22 = m
        m = (a11 * b + a12, a11, a21 * b + a22, a21)
    return m


def _normalize(A: RingElt, B: RingElt, C: RingElt) -> tuple[RingElt, RingElt, RingElt]:
    from .rings import ring_gcd

    g = ring_gcd(ring_gcd(A, B), C)
    A, B, C = ((x / g).to_ring() for x in (A, B, C))
    u = max(units(A.ring), key=lambda u: (A * u).coords)
    return A * u, B * u, C * u


def periodic_to_surd(ring: RingId, preperiod: Sequence, period: Sequence, *, check_depth: int | None = None) -> SurdSpec:
    """The quadratic surd whose expansion is ``preperiod`` followed by ``period`` repeated."""
    pre = [x if isinstance(x, RingElt) else RingElt.parse(str(x), ring) for x in preperiod]
    per = [x if isinstance(x, RingElt) else RingElt.parse(str(x), ring) for x in period]
    if not per:
        raise ValueError("period must be nonempty")
    P11, P12, P21, P22 = _mat_prod(per, ring)
    # the tail w satisfies P21 w^2 + (P22 - P11) w - P12 = 0
    if P21.is_zero():
        raise InvalidExpansion("periodic block has no finite fixed point")
    a, b, c = P21, P22 - P11, -P12
    # z = Pre(w), so w = Pre^{-1}(z) = (al z + be) / (ga z + de)
    m11, m12, m21, m22 = _mat_prod(pre, ring)
    det = m11 * m22 - m12 * m21
    al, be, ga, de = m22 * det, -m12 * det, -m21 * det, m11 * det
    A = a * al * al + b * al * ga + c * ga * ga
    B = 2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de
    C = a * be * be + b * be * de + c * de * de
    if A.is_zero():
        raise InvalidExpansion("transported fixed-point equation is degenerate")
    A, B, C = _normalize(A, B, C)
    try:
        spec_plus = make_surd(ring, A, B, C)
    except ReducibleOverK as exc:
        raise InvalidExpansion("the sequence does not describe a quadratic surd") from exc
    depth = check_depth or len(pre) + 3 * len(per) + 8
    script = Script(tuple(pre), tuple(per))
    passing = []
    for candidate in _both_roots(spec_plus):
        try:
            e = expand(candidate, script, depth)
        except ChooserFailed:
            continue
        if _recurs(e):
            passing.append((candidate, e))
    if not passing:
        raise InvalidExpansion("re-expansion violates the distance condition for both roots")
    if len(passing) == 1:
        return passing[0][0]
    # a valid expansion converges to its own value, so only one root can be right
    last = passing[0][1].steps[-1]
    return min(passing, key=lambda ce: abs(complex(ce[0].root()) - complex(last.p) / complex(last.q)))[0]


def _both_roots(spec: SurdSpec) -> list[SurdSpec]:
    out = [spec]
    other = SurdSpec(spec.ring, spec.A, spec.B, spec.C, -spec.sign, max_bits=spec.max_bits)
    other.root_box = other.enclosure()
    out.append(other)
    return out


def _recurs(e: Expansion) -> bool:
    """Whether the state at the start of the period returns after one period."""
    script: Script = e.chooser  # type: ignore[assignment]
    k, start = len(script.period), len(script.entries)
    if start + 2 * k > e.depth:
        return True
    return states_equal(e.steps[start].state, e.steps[start + k].state)


def approx_quality(e: Expansion) -> RealInterval:
    """Enclosure of ``min_n |delta_n|`` over the expansion."""
    best = None
    for r in e.steps:
        v = abs(r.delta)
        best = v if best is None else best.min(v)
    return best
