from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from complexcf import (
    AllBad,
    CircleSpec,
    ComplexInterval,
    HasRationalPoint,
    KElt,
    PointInK,
    RingElt,
    RingId,
    circle_form,
    circle_point_surd,
    classify_circle,
    congruence_obstruction,
    eval_form,
    is_norm,
    separating_circle,
)
from strategies import RINGS, elements, rings

G, E3 = RingId.G, RingId.E3
ZERO = KElt.coerce(0, G)


def circle(ring, center, r2):
    return CircleSpec(ring, KElt.coerce(center, ring) if not isinstance(center, KElt) else center, Fraction(r2))


def test_is_norm_examples():
    assert is_norm(G, 5) == RingElt(2, 1, G)
    assert is_norm(G, 7) is None
    assert is_norm(G, 1) == RingElt(1, 0, G)
    assert is_norm(E3, 2) is None and is_norm(E3, 3) is not None


@given(rings, st.integers(0, 10**5))
def test_is_norm_witness_has_that_norm(ring, n):
    w = is_norm(ring, n)
    if w is not None:
        assert w.norm() == n


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_is_norm_matches_enumeration(ring):
    norms = oracles.norm_set(ring.tag, 2000)
    assert {n for n in range(2001) if is_norm(ring, n) is not None} == norms


def test_obstruction_examples():
    assert congruence_obstruction(G, 7) == 8
    assert congruence_obstruction(E3, 2) == 3
    assert congruence_obstruction(G, 5) is None


def test_classify_examples():
    v = classify_circle(G, circle(G, 0, 1847))
    assert isinstance(v, AllBad) and v.failing == (1847,) and v.modulus == 8
    for ring in RINGS:
        assert isinstance(classify_circle(ring, circle(ring, 0, 1847)), AllBad)
    assert classify_circle(G, circle(G, 0, 2)) == HasRationalPoint(KElt.coerce(RingElt(1, 1, G), G))
    v = classify_circle(G, circle(G, 0, Fraction(49, 25)))
    assert isinstance(v, HasRationalPoint) and v.witness.norm() == Fraction(49, 25)
    v = classify_circle(E3, circle(E3, Fraction(1, 2), Fraction(2, 3)))
    assert isinstance(v, AllBad) and v.failing == (2,) and v.moduli == (3,)


@given(st.data())
def test_witness_lies_on_circle_and_verdicts_are_invariant(data):
    ring = data.draw(rings)
    m, n = data.draw(st.integers(1, 3000)), data.draw(st.integers(1, 3000))
    r2 = Fraction(m, n)
    zeta = KElt(data.draw(elements(ring, 20)), data.draw(st.integers(1, 9)))
    here = classify_circle(ring, CircleSpec(ring, zeta, r2))
    origin = classify_circle(ring, CircleSpec(ring, KElt.coerce(0, ring), r2))
    flipped = classify_circle(ring, CircleSpec(ring, zeta, 1 / r2))
    assert type(here) is type(origin) is type(flipped)
    if isinstance(here, HasRationalPoint):
        assert (here.witness - zeta).norm() == r2
        assert eval_form(circle_form(CircleSpec(ring, zeta, r2)), here.witness, 1).is_zero()
    else:
        assert not oracles.circle_meets_k(ring.tag, r2.numerator, r2.denominator, 3000)
        for f, mod in zip(here.failing, here.moduli):
            assert is_norm(ring, f) is None
            if mod is not None:
                assert f % mod == mod - 1


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_obstruction_is_sound(ring):
    for n in range(1, 10**4 + 1):
        if congruence_obstruction(ring, n) is not None:
            assert is_norm(ring, n) is None


def test_circle_point_surd_examples():
    z = circle_point_surd(G, circle(G, 0, 1847), 1)
    assert (z.A, z.B, z.C) == (RingElt(1, 0, G), RingElt(-2, 0, G), RingElt(1847, 0, G))
    assert abs(complex(z.root()) - complex(1, 1846 ** 0.5)) < 1e-9
    assert eval_form(circle_form(circle(G, 0, 1847)), z.root(), 1).is_zero()
    with pytest.raises(PointInK):
        circle_point_surd(G, circle(G, 0, 2), 1)
    z = circle_point_surd(G, circle(G, 0, 7), 0)
    assert (z.A, z.B, z.C) == (RingElt(1, 0, G), RingElt(0, 0, G), RingElt(7, 0, G))
    with pytest.raises(ValueError):
        circle_point_surd(G, circle(G, 0, 7), 3)


def test_circle_spec_validation():
    with pytest.raises(ValueError):
        CircleSpec(G, ZERO, Fraction(-1))
    assert circle(G, 0, Fraction(6, 4)).m == 3


def _check_separation(ring, z, w, c):
    assert isinstance(classify_circle(ring, c), AllBad)
    ze = c.center.enclosure(z.bits)
    assert (z - ze).abs2().upper < c.radius_sq < (w - ze).abs2().lower


def test_separating_circle_examples():
    z, w = ComplexInterval.around(0, Fraction(1, 10**9)), ComplexInterval.around(10, Fraction(1, 10**9))
    c = separating_circle(G, z, w)
    _check_separation(G, z, w, c)
    z, w = ComplexInterval.around(0.01, Fraction(1, 10**9)), ComplexInterval.around(0.02, Fraction(1, 10**9))
    c = separating_circle(G, z, w)
    _check_separation(G, z, w, c)
    with pytest.raises(ValueError):
        separating_circle(G, z, z)


@given(st.data())
def test_separating_circle_verifies(data):
    ring = data.draw(rings)
    coord = st.floats(-5, 5, allow_nan=False)
    z = complex(data.draw(coord), data.draw(coord))
    w = complex(data.draw(coord), data.draw(coord))
    if abs(z - w) < 1e-3:
        return
    zb, wb = ComplexInterval.around(z, Fraction(1, 10**12)), ComplexInterval.around(w, Fraction(1, 10**12))
    _check_separation(ring, zb, wb, separating_circle(ring, zb, wb))
