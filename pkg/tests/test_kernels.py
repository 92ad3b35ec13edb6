import random
from fractions import Fraction as F

import pytest

from gen import rand_poly, rand_rational
from tropcong import kernels
from tropcong.kernels import CellSet, PointBatch, compiled_available, poly_values, rat_equal_mask, rat_signs, rat_values, use_backend
from tropcong.polyhedra import random_point
from tropcong.tropical import TropicalPoly, TropicalRational, poly_eval, rat_eval

needs_compiled = pytest.mark.skipif(not compiled_available(), reason="compiled kernels not built")


def _points(rng, n, count):
    return [random_point(rng, n) for _ in range(count)]


def test_python_backend_matches_scalar_eval():
    rng = random.Random(21)
    with use_backend("python"):
        for n in (1, 2, 3):
            pts = _points(rng, n, 200)
            batch = PointBatch(pts)
            for _ in range(10):
                p = rand_poly(rng, n, lo=-2)
                f = rand_rational(rng, n)
                assert poly_values(p, batch) == [poly_eval(p, x) for x in pts]
                assert rat_values(f, batch) == [rat_eval(f, x) for x in pts]


@needs_compiled
def test_backends_agree():
    rng = random.Random(22)
    for n in (1, 2, 3):
        pts = _points(rng, n, 300)
        batch = PointBatch(pts)
        for _ in range(10):
            f, g = rand_rational(rng, n), rand_rational(rng, n)
            out = {}
            for name in ("python", "cython"):
                with use_backend(name):
                    out[name] = (rat_values(f, batch), rat_signs(f, batch), rat_equal_mask(f, g, batch))
            assert out["python"] == out["cython"]


@needs_compiled
def test_cell_location_backends_agree():
    rng = random.Random(23)
    cells = [[((rng.randint(-2, 2), rng.randint(-2, 2)), F(rng.randint(-3, 3), 2)) for _ in range(3)] for _ in range(6)]
    cs = CellSet(cells, 2)
    batch = PointBatch(_points(rng, 2, 500))
    with use_backend("python"):
        a = cs.locate(batch)
    with use_backend("cython"):
        b = cs.locate(batch)
    assert a == b
    for x, i in zip(batch.points, a):
        inside = [all(sum(w * v for w, v in zip(r, x)) + c >= 0 for r, c in cell) for cell in cells]
        assert i == (inside.index(True) if any(inside) else -1)


def test_huge_values_fall_back_to_exact_ints():
    # coefficients far beyond int64 must still be exact
    big = F(10**30, 7)
    p = TropicalPoly(1, [((1,), big), ((0,), -big)])
    pts = [(F(3, 11),), (F(-10**20, 3),)]
    assert poly_values(p, PointBatch(pts)) == [poly_eval(p, x) for x in pts]


def test_neg_inf_handling():
    batch = PointBatch([(F(1),), (F(-2),)])
    f = TropicalRational.neg_inf(1)
    assert rat_signs(f, batch) == [-1, -1]
    assert rat_equal_mask(f, f, batch) == [True, True]
    assert rat_equal_mask(f, TropicalRational.constant(0, 1), batch) == [False, False]


def test_use_backend_restores_selection():
    before = kernels.BACKEND
    with use_backend("python"):
        assert kernels.BACKEND == "python"
    assert kernels.BACKEND == before
