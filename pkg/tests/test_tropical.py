import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gen import rand_poly, rand_rational
from tropcong.errors import DimensionError, PreconditionError
from tropcong.exact import NEG_INF
from tropcong.polyhedra import random_point
from tropcong.tropical import (
    TropicalPoly,
    TropicalRational,
    canonical_add,
    canonical_mul,
    canonicalize,
    combine_generators,
    func_eq,
    func_eq_witness,
    normalize_pair,
    poly_add,
    poly_eval,
    poly_leq,
    poly_mul,
    poly_pow,
    rat_add,
    rat_eval,
    rat_func_eq,
    rat_inv,
    rat_min,
    rat_mul,
    rat_pow,
    t_add,
    t_mul,
)


def P1(*terms):
    """One-variable polynomial from ``(exponent, coeff)`` pairs."""
    return TropicalPoly(1, [((e,), c) for e, c in terms])


ONE_PLUS_X = P1((0, 0), (1, 0))
X = P1((1, 0))


def test_scalars():
    assert t_add(NEG_INF, F(3)) == 3
    assert t_add(F(-1), F(2)) == 2
    assert t_mul(F(1), F(2)) == 3
    assert t_mul(NEG_INF, F(2)) == NEG_INF


def test_poly_eval_examples():
    assert poly_eval(ONE_PLUS_X, [2]) == 2
    assert poly_eval(ONE_PLUS_X, [-5]) == 0
    assert poly_eval(P1((2, 1)), [3]) == 7
    assert poly_eval(TropicalPoly.neg_inf(1), [3]) == NEG_INF


def test_poly_eval_dimension_mismatch():
    with pytest.raises(DimensionError):
        poly_eval(ONE_PLUS_X, [1, 2])
    with pytest.raises(DimensionError):
        poly_add(ONE_PLUS_X, TropicalPoly.constant(0, 2))


def test_add_mul_examples():
    assert poly_add(ONE_PLUS_X, TropicalPoly.neg_inf(1)) == ONE_PLUS_X
    sq = poly_mul(ONE_PLUS_X, ONE_PLUS_X)
    assert sq == P1((0, 0), (1, 0), (2, 0))
    assert poly_eval(sq, [F(1, 2)]) == 1
    assert poly_pow(ONE_PLUS_X, 2) == P1((0, 0), (2, 0))
    assert func_eq(poly_pow(ONE_PLUS_X, 2), sq)


def test_product_is_pointwise_sum():
    rng = random.Random(1)
    p, q = rand_poly(rng, 2), rand_poly(rng, 2)
    pq = poly_mul(p, q)
    for _ in range(1000):
        x = random_point(rng, 2)
        assert poly_eval(pq, x) == poly_eval(p, x) + poly_eval(q, x)


def test_rational_examples():
    f = TropicalRational(ONE_PLUS_X, X)
    assert rat_eval(f, [2]) == 0
    assert rat_eval(f, [-3]) == 3
    rng = random.Random(2)
    g = rat_mul(f, rat_inv(f))
    for _ in range(500):
        assert rat_eval(g, [random_point(rng, 1)[0]]) == 0


def test_inverse_of_neg_inf_rejected():
    with pytest.raises(PreconditionError):
        rat_inv(TropicalRational.neg_inf(2))
    with pytest.raises(PreconditionError):
        TropicalRational(ONE_PLUS_X, TropicalPoly.neg_inf(1))


def test_canonicalize_examples():
    p = P1((0, 0), (1, -3), (2, 0))
    assert canonicalize(p) == P1((0, 0), (2, 0))
    q = P1((0, 0), (1, 1), (2, 0))
    assert canonicalize(q) == q
    assert canonicalize(TropicalPoly.neg_inf(3)) == TropicalPoly.neg_inf(3)


def test_canonicalize_keeps_tied_face_terms_out():
    # x + y meets max(2x, 2y) only along the diagonal, never strictly above it
    p = TropicalPoly(2, [((2, 0), 0), ((0, 2), 0), ((1, 1), 0)])
    assert canonicalize(p) == TropicalPoly(2, [((2, 0), 0), ((0, 2), 0)])


def test_func_eq_examples():
    assert func_eq(poly_add(X, X), X)
    assert func_eq(P1((0, 0), (1, 0), (2, 0)), P1((0, 0), (2, 0)))
    ok, w = func_eq_witness(ONE_PLUS_X, X)
    assert not ok
    assert poly_eval(ONE_PLUS_X, w) != poly_eval(X, w)


def test_poly_leq_witness():
    ok, w = poly_leq(ONE_PLUS_X, X)
    assert not ok and poly_eval(ONE_PLUS_X, w) > poly_eval(X, w)
    assert poly_leq(X, ONE_PLUS_X) == (True, None)


def test_func_eq_agrees_with_dense_sampling():
    rng = random.Random(3)
    grid = [(F(i, 4), F(j, 4)) for i in range(-40, 41, 2) for j in range(-40, 41, 2)]
    for _ in range(25):
        p = rand_poly(rng, 2, 4)
        q = canonicalize(p) if rng.random() < 0.5 else rand_poly(rng, 2, 4)
        sampled = all(poly_eval(p, x) == poly_eval(q, x) for x in grid)
        exact = func_eq(p, q)
        # sampling can only miss a difference, never invent one
        assert exact <= sampled


def test_normalize_pair_example():
    x = TropicalRational(X)
    zero = TropicalRational.constant(0, 1)
    h, h2 = normalize_pair(x, zero)
    assert rat_func_eq(h, TropicalRational(ONE_PLUS_X))
    assert rat_func_eq(h2, TropicalRational(P1((0, 0), (-1, 0))))


def test_normalize_pair_of_equal_functions_is_zero():
    rng = random.Random(4)
    f = rand_rational(rng, 2)
    zero = TropicalRational.constant(0, 2)
    for h in normalize_pair(f, f):
        assert rat_func_eq(h, zero)


def test_normalize_pair_nonnegative_and_round_trip():
    rng = random.Random(5)
    for _ in range(20):
        f, g = rand_rational(rng, 2), rand_rational(rng, 2)
        h, h2 = normalize_pair(f, g)
        fg = rat_add(f, g)
        for _ in range(25):
            x = random_point(rng, 2)
            assert rat_eval(h, x) >= 0 and rat_eval(h2, x) >= 0
            # (h, 0) rebuilds (f + g, g); (h', 0) rebuilds (f + g, f)
            assert rat_eval(h, x) + rat_eval(g, x) == rat_eval(fg, x)
            assert rat_eval(h2, x) + rat_eval(f, x) == rat_eval(fg, x)


def test_normalize_pair_rejects_neg_inf():
    with pytest.raises(PreconditionError):
        normalize_pair(TropicalRational.neg_inf(1), TropicalRational(X))


def test_combine_generators_examples():
    zero = TropicalRational.constant(0, 1)
    f = combine_generators([(TropicalRational(X), zero)])
    assert rat_func_eq(f, TropicalRational(P1((0, 0), (1, 0), (-1, 0))))
    for v in (F(-3), F(-1, 7), F(1, 5), F(2)):
        assert rat_eval(f, [v]) > 0
    assert rat_eval(f, [0]) == 0
    g = rand_rational(random.Random(6), 1)
    assert rat_func_eq(combine_generators([(g, g)]), zero)
    with pytest.raises(PreconditionError):
        combine_generators([])


def test_rat_min_and_pow():
    rng = random.Random(7)
    for _ in range(10):
        f, g = rand_rational(rng, 2), rand_rational(rng, 2)
        m = rat_min(f, g)
        m2 = rat_min(TropicalRational(canonicalize(f.num), canonicalize(f.den)),
                     TropicalRational(canonicalize(g.num), canonicalize(g.den)), canonical=True)
        f3 = rat_pow(f, -3)
        for _ in range(30):
            x = random_point(rng, 2)
            want = min(rat_eval(f, x), rat_eval(g, x))
            assert rat_eval(m, x) == want == rat_eval(m2, x)
            assert rat_eval(f3, x) == -3 * rat_eval(f, x)


def test_canonical_ops_match_plain_ops():
    rng = random.Random(8)
    for _ in range(20):
        p, q = canonicalize(rand_poly(rng, 2)), canonicalize(rand_poly(rng, 2))
        assert canonical_mul(p, q) == canonicalize(poly_mul(p, q))
        assert canonical_add(p, q) == canonicalize(poly_add(p, q))


# -- semiring laws at the evaluation level -----------------------------------

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
exps = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
polys = st.lists(st.tuples(exps, fracs), min_size=0, max_size=5).map(lambda ts: TropicalPoly(2, ts))
points = st.tuples(fracs, fracs)


@settings(max_examples=150, deadline=None)
@given(polys, polys, polys, points)
def test_semiring_laws(p, q, r, x):
    ev = lambda a: poly_eval(a, x)  # noqa: E731
    assert ev(poly_add(p, q)) == t_add(ev(p), ev(q))
    assert ev(poly_mul(p, q)) == t_mul(ev(p), ev(q))
    assert ev(poly_mul(p, poly_add(q, r))) == ev(poly_add(poly_mul(p, q), poly_mul(p, r)))
    assert poly_add(p, q) == poly_add(q, p)
    assert poly_mul(poly_mul(p, q), r) == poly_mul(p, poly_mul(q, r))


@settings(max_examples=60, deadline=None)
@given(polys, points)
def test_canonicalize_preserves_values(p, x):
    c = canonicalize(p)
    assert poly_eval(c, x) == poly_eval(p, x)
    assert canonicalize(c) == c
    assert set(c.terms) <= set(p.terms)


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys)
def test_func_eq_is_an_equivalence(p, q, r):
    assert func_eq(p, p)
    assert func_eq(p, q) == func_eq(q, p)
    if func_eq(p, q) and func_eq(q, r):
        assert func_eq(p, r)
    assert func_eq(p, canonicalize(p))


@settings(max_examples=60, deadline=None)
@given(polys, polys, points)
def test_rational_ops_pointwise(p, q, x):
    if p.is_neg_inf() or q.is_neg_inf():
        return
    f, g = TropicalRational(p, q), TropicalRational(q, p)
    fx, gx = rat_eval(f, x), rat_eval(g, x)
    assert rat_eval(rat_add(f, g), x) == max(fx, gx)
    assert rat_eval(rat_mul(f, g), x) == fx + gx
    assert rat_eval(rat_inv(f), x) == -fx
