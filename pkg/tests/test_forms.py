import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from complexcf import (
    Circle,
    ComplexInterval,
    Empty,
    FormMatrix,
    KElt,
    Line,
    NearestInteger,
    NotAZero,
    Point,
    RingElt,
    RingId,
    Sigma,
    classify_zero_set,
    entry_bound,
    eval_form,
    expand,
    hermitian_quotient_bound,
    make_surd,
    neat_indices,
    neat_radius,
    orbit,
    surd_to_form,
    transform,
)
from complexcf.algebraic import moebius_image, states_equal
from strategies import elements, random_surds, rings, unimodular

G = RingId.G
HERM = Sigma.CONJUGATION
QUAD = Sigma.IDENTITY
NEAREST = NearestInteger()


def g(a, b=0):
    return RingElt(a, b, G)


def diag(a, d, sigma):
    return FormMatrix(a, 0, 0, d, sigma=sigma, ring=G)


def gaussian(x: KElt):
    """``(re, im)`` Fractions of a Gaussian rational."""
    return (Fraction(x.num.a, x.den), Fraction(x.num.b, x.den))


@st.composite
def forms(draw, ring=None, sigma=None):
    ring = ring or draw(rings)
    sigma = sigma or draw(st.sampled_from([QUAD, HERM]))
    k = draw(st.integers(1, 4))
    B = KElt(draw(elements(ring, 8)), k)
    if sigma is HERM:
        A, D = (KElt.coerce(Fraction(draw(st.integers(-20, 20)), k), ring) for _ in range(2))
    else:
        A, D = (KElt(draw(elements(ring, 8)), k) for _ in range(2))
    return FormMatrix(A, B, sigma.apply(B), D, sigma=sigma, ring=ring)


# -- evaluation and transformation ---------------------------------------------


def test_eval_examples():
    X = diag(1, -2, HERM)
    assert eval_form(X, g(0, 1), 1) == KElt.coerce(-1, G)
    root2 = make_surd(G, 1, 0, -2).root()
    assert eval_form(diag(1, -2, QUAD), root2, 1).is_zero()
    root2i = make_surd(G, 1, 0, 2).root()
    assert eval_form(X, root2i, 1).is_zero()
    assert not eval_form(diag(1, -2, QUAD), root2i, 1).is_zero()


def test_transform_examples():
    X = diag(1, -2, HERM)
    assert transform(X, (1, 0, 0, 1)) == X
    Y = transform(X, (g(0, 1), g(1), g(1), g(0)))
    assert Y == FormMatrix(-1, g(0, -1), g(0, 1), 1, sigma=HERM, ring=G)
    assert Y.det() == KElt.coerce(-2, G)
    with pytest.raises(ValueError):
        transform(X, (2, 0, 0, 1))


@given(st.data())
def test_transform_preserves_det_and_symmetry(data):
    X = data.draw(forms())
    h = data.draw(unimodular(X.ring))
    Y = transform(X, h)
    assert Y.det() == X.det()
    assert Y.C == X.sigma.apply(Y.B)
    assert Y.k == X.k


def test_symmetry_is_enforced():
    with pytest.raises(ValueError):
        FormMatrix(1, g(0, 1), g(0, 1), 1, sigma=HERM, ring=G)
    with pytest.raises(ValueError):
        FormMatrix(g(0, 1), 0, 0, 1, sigma=HERM, ring=G)
    with pytest.raises(ValueError):
        FormMatrix(KElt(g(1), 2), 0, 0, 1, k=3, ring=G)


# -- zero sets ------------------------------------------------------------------


def test_zero_set_examples():
    assert classify_zero_set(diag(1, -2, HERM)) == Circle(KElt.coerce(0, G), Fraction(2))
    line = classify_zero_set(FormMatrix(0, 1, 1, 0, sigma=HERM, ring=G))
    assert isinstance(line, Line) and line.c == 0
    assert classify_zero_set(diag(1, 1, HERM)) == Empty()
    assert classify_zero_set(FormMatrix(1, -1, -1, 1, sigma=HERM, ring=G)) == Point(KElt.coerce(1, G))


def test_circle_radius_scales_with_leading_coefficient():
    # 2|z|^2 - 8 = 0 is the circle of radius 2
    assert classify_zero_set(diag(2, -8, HERM)) == Circle(KElt.coerce(0, G), Fraction(4))
    # 3|z - 1|^2 - 3 = 3|z|^2 - 3z - 3conj(z)
    c = classify_zero_set(FormMatrix(3, -3, -3, 0, sigma=HERM, ring=G))
    assert c == Circle(KElt.coerce(1, G), Fraction(1))


def test_surd_to_form_examples():
    assert surd_to_form(make_surd(G, 1, 0, -2)) == diag(1, -2, QUAD)
    assert surd_to_form(make_surd(G, 1, -2, -1)) == FormMatrix(1, -1, -1, -1, ring=G)
    assert surd_to_form(make_surd(G, 1, 0, 2)) == diag(1, 2, QUAD)


@given(st.data())
def test_zero_preservation_along_expansion(data):
    ring = data.draw(rings)
    z = random_surds(ring, 1, seed=data.draw(st.integers(0, 10**6)))[0]
    e = expand(z, NEAREST, 50)
    states = e.states()
    for X in (surd_to_form(z), data.draw(forms(ring))):
        before = eval_form(X, states[0], 1)
        for r in e.steps:
            h = (r.p, r.p_prev, r.q, r.q_prev)
            after = eval_form(transform(X, h), states[r.n + 1], 1)
            assert before.is_zero() == after.is_zero()
            encl = after.enclosure(256)
            if before.is_zero():
                assert encl.contains_zero() and encl.width < Fraction(1, 10**20)
            if r.n % 10 == 0:
                assert states_equal(moebius_image(h, states[r.n + 1]), states[0])


# -- orbits ---------------------------------------------------------------------


def _orbit(z, X, depth):
    e = expand(z, NEAREST, depth)
    N = neat_indices(e, neat_radius(e))
    return e, N, orbit(X, e, N, cross_check=None)


def test_sqrt2_orbit_golden():
    z = make_surd(G, 1, 0, -2)
    e, N, rep = _orbit(z, surd_to_form(z), 200)
    assert N == list(range(1, 201))
    assert len(rep.distinct) == 2 and rep.stabilization_index == 2
    want, last = oracles.gaussian_orbit([(1, 0), (0, 0), (0, 0), (-2, 0)], False, [a.coords for a in e.partial_quotients], N)
    assert [tuple(gaussian(x) for x in m.entries) for m in rep.distinct] == want
    assert last == rep.stabilization_index


def test_hermitian_orbit_golden():
    z = make_surd(G, 1, 0, 2)
    X = diag(1, -2, HERM)
    e, N, rep = _orbit(z, X, 200)
    assert len(rep.distinct) == 2 and rep.stabilization_index == 2
    want, _ = oracles.gaussian_orbit([(1, 0), (0, 0), (0, 0), (-2, 0)], True, [a.coords for a in e.partial_quotients], N)
    assert [tuple(gaussian(x) for x in m.entries) for m in rep.distinct] == want
    assert rep.new_after(20) == []


def test_orbit_edge_cases():
    z = make_surd(G, 1, 0, -2)
    e = expand(z, NEAREST, 10)
    rep = orbit(surd_to_form(z), e, [])
    assert rep.distinct == [] and rep.stabilization_index == 0
    with pytest.raises(NotAZero):
        orbit(diag(1, 2, QUAD), e, [1])
    with pytest.raises(ValueError):
        orbit(surd_to_form(z), e, [11])


@pytest.mark.parametrize("seed", range(4))
def test_orbit_invariants(seed):
    for ring in RingId:
        z = random_surds(ring, 1, seed=f"orbit{seed}")[0]
        X = surd_to_form(z)
        e, N, rep = _orbit(z, X, 300)
        for m in rep.distinct:
            assert m.det() == X.det()
        for n in N:
            m = rep.distinct[rep.per_index[n]]
            r = e.steps[n]
            assert m.A == eval_form(X, r.p, r.q)
            assert m.D == eval_form(X, r.p_prev, r.q_prev)
        # every entry stays inside the explicit bound
        if N:
            M = max(abs(e.steps[n].delta).upper for n in N)
            bound = entry_bound(X, z.root_box, M)
            for m in rep.distinct:
                assert m.max_abs_sq() <= bound * bound


# -- bounds ---------------------------------------------------------------------


def test_entry_bound_golden():
    X = diag(1, -2, HERM)
    zi = make_surd(G, 1, 0, 2).enclosure(128)
    b = entry_bound(X, zi, 1)
    # 8 sqrt(2): the D-bound 2 sqrt(2) (M + 1) + sqrt(2) (M + 1)^2 dominates
    assert 128 <= b * b and abs(float(b) - 8 * math.sqrt(2)) < 1e-12
    sym = entry_bound(X, zi, 1, symmetric=True)
    assert (sym - 4) ** 2 >= 32 and abs(float(sym) - (4 * math.sqrt(2) + 4)) < 1e-12
    b0 = entry_bound(X, zi, 0)
    assert b0 >= 2
    assert abs(float(b0) - 3 * math.sqrt(2)) < 1e-12


@given(forms(), st.fractions(0, 5), st.fractions(0, 5))
def test_entry_bound_monotone_in_M(X, m1, m2):
    z = ComplexInterval.point(Fraction(3, 2), Fraction(1, 3))
    lo, hi = sorted((m1, m2))
    assert entry_bound(X, z, lo) <= entry_bound(X, z, hi)
    assert entry_bound(X, z, lo) ** 2 >= X.max_abs_sq()


def test_hermitian_quotient_bound():
    X = diag(1, -2, HERM)
    assert hermitian_quotient_bound(X, 3) > 3 + math.sqrt(2)
    with pytest.raises(ValueError):
        hermitian_quotient_bound(diag(1, -2, QUAD), 3)
