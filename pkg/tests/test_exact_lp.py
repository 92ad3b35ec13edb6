import random
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.optimize import linprog as scipy_linprog

from tropcong.errors import ParseError
from tropcong.exact import ceil_sqrt, nullspace, primitive, rank, rref, scale_to_integers, solve, to_fraction
from tropcong.lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    feasible_point,
    fm_is_empty,
    fm_project,
    linprog,
    linprog_primal,
    strict_feasible,
)


def _random_lp(rng):
    n = rng.randint(1, 4)
    m = rng.randint(0, 8)
    k = rng.choice([n, max(1, n - 1)])  # some problems leave a coordinate free of constraints
    A = [[rng.randint(-3, 3) if j < k else 0 for j in range(n)] for _ in range(m)]
    b = [rng.randint(-3, 5) for _ in range(m)]
    me = rng.randint(0, 2) if rng.random() < 0.3 else 0
    Ae = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(me)]
    be = [rng.randint(-2, 2) for _ in range(me)]
    c = [rng.randint(-2, 2) for _ in range(n)] if rng.random() < 0.8 else [0] * n
    return c, A, b, Ae, be


def _satisfies(x, A, b, Ae, be):
    return all(sum(F(a) * v for a, v in zip(r, x)) <= bb for r, bb in zip(A, b)) and all(
        sum(F(a) * v for a, v in zip(r, x)) == bb for r, bb in zip(Ae, be)
    )


def test_to_fraction_rejects_floats():
    assert to_fraction("3/4") == F(3, 4)
    assert to_fraction(-2) == -2
    for bad in (0.5, "0.5", "1e3", True):
        with pytest.raises(ParseError):
            to_fraction(bad)


def test_linear_algebra_helpers():
    R, piv = rref([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert piv == [0, 1] and rank([[1, 2, 3], [2, 4, 6]]) == 1
    assert solve([[2, 1], [1, -1]], [3, 0]) == [1, 1]
    ns = nullspace([[1, 1, 1]], 3)
    assert len(ns) == 2 and all(sum(v) == 0 for v in ns)
    assert scale_to_integers([F(1, 2), F(-1, 3)]) == [3, -2]
    assert primitive([F(2), F(4)])[0] == (1, 2)
    q = ceil_sqrt(F(2))
    assert q * q >= 2 and (q - F(1, 1 << 20)) ** 2 < 2


def test_small_examples():
    r = linprog([1, 1], [[1, 0], [0, 1], [-1, 0], [0, -1]], [1, 2, 0, 0])
    assert r.status == OPTIMAL and r.value == 3 and r.x == (1, 2)
    assert linprog([1], [[-1]], [0]).status == UNBOUNDED
    assert linprog([0], [[1], [-1]], [0, -1]).status == INFEASIBLE
    r = linprog([1, 0], [[1, 1]], [1], [[1, -1]], [0])
    assert r.value == F(1, 2) and r.x == (F(1, 2), F(1, 2))
    # no constraints at all
    assert linprog([0, 0]).status == OPTIMAL
    assert linprog([1, 0]).status == UNBOUNDED


def test_dual_and_primal_agree():
    rng = random.Random(11)
    for _ in range(600):
        c, A, b, Ae, be = _random_lp(rng)
        r1 = linprog(c, A, b, Ae, be)
        r2 = linprog_primal(c, A, b, Ae, be)
        assert r1.status == r2.status
        if r1.status == OPTIMAL:
            assert r1.value == r2.value
            assert sum(F(a) * v for a, v in zip(c, r1.x)) == r1.value
        if r1.x is not None:
            assert _satisfies(r1.x, A, b, Ae, be)


def test_feasibility_matches_fourier_motzkin():
    rng = random.Random(12)
    for _ in range(300):
        c, A, b, _, _ = _random_lp(rng)
        if not A:
            continue
        n = len(c)
        x = feasible_point(A, b, nvars=n)
        assert (x is None) == fm_is_empty(list(zip(A, b)), n)


def test_optimum_matches_scipy():
    rng = random.Random(13)
    for _ in range(200):
        c, A, b, Ae, be = _random_lp(rng)
        r = linprog(c, A, b, Ae, be)
        n = len(c)
        s = scipy_linprog(
            -np.array(c, dtype=float),
            A_ub=np.array(A, dtype=float).reshape(-1, n) if A else None,
            b_ub=np.array(b, dtype=float) if A else None,
            A_eq=np.array(Ae, dtype=float).reshape(-1, n) if Ae else None,
            b_eq=np.array(be, dtype=float) if Ae else None,
            bounds=[(None, None)] * n,
            method="highs",
        )
        want = {0: OPTIMAL, 2: INFEASIBLE, 3: UNBOUNDED}[s.status]
        assert r.status == want
        if want == OPTIMAL:
            assert float(r.value) == pytest.approx(-s.fun, abs=1e-7)


def test_strict_feasible():
    x = strict_feasible([[1, 0], [-1, 0], [0, 1]], [1, 0, 5])
    assert x is not None and 0 < x[0] < 1 and x[1] < 5
    assert strict_feasible([[1], [-1]], [0, 0]) is None


def test_fm_project_shadow():
    # triangle x >= 0, y >= 0, x + y <= 2 projects to 0 <= x <= 2
    rows = [([-1, 0], 0), ([0, -1], 0), ([1, 1], 2)]
    shadow = fm_project(rows, [0], 2)
    lo = max(-b / a[0] for a, b in shadow if a[0] < 0)
    hi = min(b / a[0] for a, b in shadow if a[0] > 0)
    assert (lo, hi) == (0, 2)
