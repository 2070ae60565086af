from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from complexcf import (
    AmbiguousSelector,
    Cmp,
    ComplexInterval,
    KElt,
    ReducibleOverK,
    RingElt,
    RingId,
    approximate,
    cmp_abs2,
    make_surd,
    moebius_image,
    square_in_K,
    states_equal,
)
from complexcf.algebraic import step_state
from strategies import elements, rings, unimodular

G, E3 = RingId.G, RingId.E3
ONE = (1, 0, 0, 1)


def sqrt2():
    return make_surd(G, 1, 0, -2, ComplexInterval.around(1.414, 0.01))


def sqrt2i():
    return make_surd(G, 1, 0, 2, ComplexInterval.around(1.414j, 0.01))


def mid(box):
    return box.mid


@st.composite
def surds(draw, ring=None):
    ring = ring or draw(rings)
    A = draw(elements(ring, 6).filter(lambda x: not x.is_zero()))
    B, C = draw(elements(ring, 6)), draw(elements(ring, 6))
    try:
        return make_surd(ring, A, B, C, root_selector=draw(st.sampled_from([None, 1 + 1j, -3 - 1j])))
    except (ReducibleOverK, AmbiguousSelector):
        assume(False)


def reference_root(z):
    """The chosen root recomputed with mpmath."""
    ring = z.ring.tag
    roots = oracles.quadratic_roots(ring, z.A.coords, z.B.coords, z.C.coords)
    c = complex(z.root_box.mid)
    return min(roots, key=lambda r: abs(r - c))


# -- construction -------------------------------------------------------------


def test_make_surd_examples():
    z = sqrt2()
    assert abs(mid(approximate(z, Fraction(1, 10**10))) - 2 ** 0.5) < 1e-10
    w = sqrt2i()
    assert abs(mid(approximate(w, Fraction(1, 10**10))) - 2 ** 0.5 * 1j) < 1e-10
    with pytest.raises(ReducibleOverK):
        make_surd(G, 1, 0, -1, ComplexInterval.around(1, 0.5))


def test_default_root_prefers_larger_real_part():
    assert complex(make_surd(G, 1, 0, -2).root()).real > 0
    assert complex(make_surd(G, 1, 0, 2).root()).imag > 0


def test_selector_must_isolate():
    with pytest.raises(AmbiguousSelector):
        make_surd(G, 1, 0, -2, ComplexInterval.around(0, 2))
    with pytest.raises(AmbiguousSelector):
        make_surd(G, 1, 0, -2, ComplexInterval.around(5, 0.1))


@given(surds())
def test_root_box_encloses_a_root(z):
    with mpmath.workdps(40):
        r = reference_root(z)
        box = z.root_box
        lo = complex(float(box.re_lo), float(box.im_lo))
        hi = complex(float(box.re_hi), float(box.im_hi))
        assert lo.real - 1e-15 <= r.real <= hi.real + 1e-15
        assert lo.imag - 1e-15 <= r.imag <= hi.imag + 1e-15
        A, B, C = (oracles.value(z.ring.tag, *x.coords) for x in (z.A, z.B, z.C))
        assert abs(A * r * r + B * r + C) < 1e-25 * (1 + abs(A) + abs(B) + abs(C)) * (1 + abs(r)) ** 2


# -- Moebius images -----------------------------------------------------------


def test_moebius_examples():
    s = sqrt2().root()
    assert states_equal(moebius_image(ONE, s), s)
    t = moebius_image((0, 1, 1, -1), s)
    assert abs(mid(approximate(t, Fraction(1, 10**10))) - 2.41421356237) < 1e-10
    assert states_equal(t, step_state(s, RingElt(1, 0, G)))
    u = moebius_image((0, 1, 1, -3), t)
    assert abs(mid(approximate(u, Fraction(1, 10**10))) - (-1 - 2 ** -0.5)) < 1e-10
    with pytest.raises(ValueError):
        moebius_image((2, 0, 0, 1), s)


@given(st.data())
def test_moebius_functoriality(data):
    z = data.draw(surds())
    g, h = data.draw(unimodular(z.ring)), data.draw(unimodular(z.ring))
    s = z.root()
    gh = (g[0] * h[0] + g[1] * h[2], g[0] * h[1] + g[1] * h[3], g[2] * h[0] + g[3] * h[2], g[2] * h[1] + g[3] * h[3])
    assert states_equal(moebius_image(g, moebius_image(h, s)), moebius_image(gh, s))


@given(st.data())
def test_moebius_value_matches_mpmath(data):
    z = data.draw(surds())
    g = data.draw(unimodular(z.ring))
    with mpmath.workdps(60):
        r = reference_root(z)
        a, b, c, d = (oracles.value(z.ring.tag, *x.coords) for x in g)
        want = (a * r + b) / (c * r + d)
        box = approximate(moebius_image(g, z.root()), Fraction(1, 10**20))
        assert abs(complex(box.mid) - complex(want)) < 1e-15 * (1 + abs(want))


@given(surds(), st.sampled_from([Fraction(1, 10**6), Fraction(1, 10**20), Fraction(1, 10**40)]))
def test_enclosures_nest(z, eps):
    s = z.root()
    coarse = approximate(s, eps)
    fine = s.enclosure(4 * coarse.bits)
    assert coarse.contains(fine)
    assert coarse.width <= eps


# -- equality and comparison --------------------------------------------------


def test_states_equal_examples():
    z = sqrt2()
    s = z.root()
    z1 = step_state(s, RingElt(1, 0, G))
    z2 = step_state(z1, RingElt(2, 0, G))
    assert states_equal(s, s)
    assert states_equal(z1, z2)
    plus1 = moebius_image((1, 1, 0, 1), s)
    plus2 = moebius_image((1, 2, 0, 1), s)
    assert states_equal(z1, plus1)
    assert not states_equal(plus1, plus2)


@given(st.data())
def test_equality_coherence(data):
    z = data.draw(surds())
    g, h = data.draw(unimodular(z.ring)), data.draw(unimodular(z.ring))
    s1, s2 = moebius_image(g, z.root()), moebius_image(h, z.root())
    neg = tuple(-x for x in g)
    assert states_equal(s1, moebius_image(neg, z.root()))
    e1, e2 = approximate(s1, Fraction(1, 10**20)), approximate(s2, Fraction(1, 10**20))
    if states_equal(s1, s2):
        assert e1.overlaps(e2)
    else:
        bits = 64
        while s1.enclosure(bits).overlaps(s2.enclosure(bits)):
            bits *= 2
            assert bits <= 1 << 14


def test_cmp_abs2_examples():
    s = sqrt2().root()
    assert cmp_abs2(s, RingElt(1, 0, G), 1) is Cmp.LESS
    assert cmp_abs2(s, RingElt(0, 0, G), 1) is Cmp.GREATER
    assert cmp_abs2(s, RingElt(0, 0, G), 2) is Cmp.EQUAL
    half = ComplexInterval.point(Fraction(1, 2), Fraction(1, 2))
    assert cmp_abs2(half, RingElt(0, 0, G), Fraction(1, 2)) is Cmp.EQUAL


@given(st.data())
def test_cmp_abs2_agrees_with_mpmath_and_refinement(data):
    z = data.draw(surds())
    a = data.draw(elements(z.ring, 5))
    c = data.draw(st.builds(Fraction, st.integers(1, 400), st.integers(1, 20)))
    verdict = cmp_abs2(z.root(), a, c)
    assert verdict in (Cmp.LESS, Cmp.EQUAL, Cmp.GREATER)
    with mpmath.workdps(60):
        d2 = abs(reference_root(z) - oracles.value(z.ring.tag, *a.coords)) ** 2 - mpmath.mpf(c.numerator) / c.denominator
    if abs(d2) > 1e-30:
        assert verdict == (Cmp.LESS if d2 < 0 else Cmp.GREATER)
    # every refinement that decides agrees with the verdict
    for bits in (64, 256, 1024):
        d = (z.root().enclosure(bits) - a.enclosure(bits)).abs2()
        if d.certainly_lt(c):
            assert verdict is Cmp.LESS
        elif d.lower > c:
            assert verdict is Cmp.GREATER


def test_cmp_abs2_exact_on_circle():
    # 1 + sqrt(-1846) lies on |z|^2 = 1847
    z = make_surd(G, 1, -2, 1847)
    assert cmp_abs2(z.root(), RingElt(0, 0, G), 1847) is Cmp.EQUAL
    assert cmp_abs2(z.root(), RingElt(1, 0, G), 1846) is Cmp.EQUAL


# -- squares in K -------------------------------------------------------------


def test_square_in_K_examples():
    assert square_in_K(KElt.coerce(-1, G)) == KElt.from_ring(RingElt(0, 1, G))
    assert square_in_K(KElt.coerce(2, G)) is None
    w = RingElt(0, 1, E3)
    assert square_in_K(KElt.from_ring(w * w)) == KElt.from_ring(w)


@given(st.data())
def test_square_in_K_recovers_squares(data):
    ring = data.draw(rings)
    x = data.draw(elements(ring, 1000))
    k = data.draw(st.integers(1, 50))
    y = KElt(x, k)
    r = square_in_K(y * y)
    assert r is not None and r * r == y * y
    assert r in (y, -y)
