"""Exact rational linear programming.

Three independent routes are provided: a simplex on the dual problem (the
default), a two-phase primal tableau simplex, both with Bland's anti-cycling
rule, and Fourier-Motzkin elimination.  Everything is computed in
:class:`fractions.Fraction`, so feasibility verdicts are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import rref, scale_to_integers, solve

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _int_row(values) -> tuple[list[int], int]:
    """Integer multiple of a rational row and the positive multiplier used."""
    d = math.lcm(*(Fraction(v).denominator for v in values))
    return [int(Fraction(v) * d) for v in values], d


def _reduce(row: list[int]) -> list[int]:
    g = math.gcd(*row)
    return [v // g for v in row] if g > 1 else row


class _Objective:
    """Reduced-cost row ``v / den``; ``v[-1] / den`` is minus the objective value."""

    def __init__(self, values):
        self.v, self.den = _int_row(values)

    def value(self) -> Fraction:
        return Fraction(-self.v[-1], self.den)


class _Tableau:
    """Fraction-free simplex tableau.

    Each row (coefficients then right-hand side) is stored as integers scaled
    by an arbitrary positive factor, so the basic column of row ``r`` holds a
    positive integer rather than 1.
    """

    def __init__(self, rows, rhs, basis):
        self.rows = [_reduce(_int_row(list(r) + [b])[0]) for r, b in zip(rows, rhs)]
        self.basis = basis

    def rhs(self, r: int) -> Fraction:
        row = self.rows[r]
        return Fraction(row[-1], row[self.basis[r]])

    def pivot(self, r: int, c: int, objs: list[_Objective]) -> None:
        row = self.rows[r]
        p = row[c]
        if p < 0:
            row = [-v for v in row]
            self.rows[r] = row
            p = -p
        nz = [(j, v) for j, v in enumerate(row) if v]
        for i, other in enumerate(self.rows):
            f = other[c]
            if i != r and f:
                new = [p * v for v in other]
                for j, v in nz:
                    new[j] -= f * v
                self.rows[i] = _reduce(new)
        for obj in objs:
            f = obj.v[c]
            if f:
                new = [p * v for v in obj.v]
                for j, v in nz:
                    new[j] -= f * v
                g = math.gcd(obj.den * p, *new)
                obj.v = [v // g for v in new]
                obj.den = obj.den * p // g
        self.basis[r] = c

    def price_out(self, obj: _Objective) -> None:
        """Make the reduced costs of basic columns zero."""
        for r, c in enumerate(self.basis):
            f = obj.v[c]
            if f:
                row = self.rows[r]
                p = row[c]
                new = [p * v - f * w for v, w in zip(obj.v, row)]
                g = math.gcd(obj.den * p, *new)
                obj.v = [v // g for v in new]
                obj.den = obj.den * p // g

    def run(self, obj: _Objective, allowed: int, extra: list[_Objective]) -> str:
        """Maximize with Bland's rule: lowest entering index, ties by lowest basic index."""
        while True:
            enter = next((j for j in range(allowed) if obj.v[j] > 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    # ratio (row[-1] / p_i) / (a / p_i) = row[-1] / a
                    if best is None:
                        best = (i, row[-1], a)
                        continue
                    _, bn, ba = best
                    lhs, rhs_ = row[-1] * ba, bn * a
                    if lhs < rhs_ or (lhs == rhs_ and self.basis[i] < self.basis[best[0]]):
                        best = (i, row[-1], a)
            if best is None:
                return UNBOUNDED
            self.pivot(best[0], enter, [obj] + extra)

    def solution(self, ncols: int) -> list[Fraction]:
        vals = [_ZERO] * ncols
        for r, c in enumerate(self.basis):
            vals[c] = self.rhs(r)
        return vals


def linprog_primal(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Same contract as :func:`linprog`, solved on the primal tableau.

    Free variables are split into positive and negative parts and every row
    gets a slack, so the tableau is large; kept as an independent check.
    """
    n = len(c)
    m_ub, m_eq = len(a_ub), len(a_eq)
    m = m_ub + m_eq
    # columns: x+ (n), x- (n), slacks (m_ub), artificials (m)
    nstruct = 2 * n + m_ub
    ncols = nstruct + m
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    basis: list[int] = []
    need_art: list[int] = []
    for i in range(m):
        if i < m_ub:
            coeffs, b = a_ub[i], Fraction(b_ub[i])
        else:
            coeffs, b = a_eq[i - m_ub], Fraction(b_eq[i - m_ub])
        row = [_ZERO] * ncols
        for j, v in enumerate(coeffs):
            v = Fraction(v)
            row[j] = v
            row[n + j] = -v
        if i < m_ub:
            row[2 * n + i] = Fraction(1)
        sign = 1
        if b < 0:
            sign = -1
            row = [-v for v in row]
            b = -b
        if i < m_ub and sign == 1:
            basis.append(2 * n + i)
        else:
            row[nstruct + i] = Fraction(1)
            basis.append(nstruct + i)
            need_art.append(i)
        rows.append(row)
        rhs.append(b)
    tab = _Tableau(rows, rhs, basis)

    obj2 = [_ZERO] * (ncols + 1)
    for j, v in enumerate(c):
        obj2[j] = Fraction(v)
        obj2[n + j] = -Fraction(v)
    obj2 = _Objective(obj2)

    if need_art:
        obj1 = [_ZERO] * (ncols + 1)
        for i in need_art:
            obj1[nstruct + i] = Fraction(-1)
        obj1 = _Objective(obj1)
        tab.price_out(obj1)
        tab.run(obj1, ncols, [obj2])
        if obj1.v[-1] != 0:
            return LPResult(INFEASIBLE)
        # drive remaining artificials out of the basis
        for r in range(len(tab.rows) - 1, -1, -1):
            if tab.basis[r] >= nstruct:
                col = next((j for j in range(nstruct) if tab.rows[r][j] != 0), None)
                if col is None:
                    del tab.rows[r], tab.basis[r]
                else:
                    tab.pivot(r, col, [obj2])
    tab.price_out(obj2)
    status = tab.run(obj2, nstruct, [])
    vals = tab.solution(ncols)
    x = tuple(vals[j] - vals[n + j] for j in range(n))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, x, None)
    return LPResult(OPTIMAL, x, obj2.value())


def _std_simplex(a, b, c):
    """Maximize ``c . y`` subject to ``a y = b``, ``y >= 0`` with independent rows.

    Returns ``(status, basis, y)``; ``basis`` lists one column per row.
    """
    r, m = len(a), len(c)
    rows, rhs = [], []
    for i in range(r):
        row = list(a[i]) + [_ZERO] * r
        bi = b[i]
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        row[m + i] = Fraction(1)
        rows.append(row)
        rhs.append(bi)
    tab = _Tableau(rows, rhs, [m + i for i in range(r)])
    obj2 = _Objective([Fraction(v) for v in c] + [_ZERO] * (r + 1))
    obj1 = _Objective([_ZERO] * m + [Fraction(-1)] * r + [_ZERO])
    tab.price_out(obj1)
    tab.run(obj1, m, [obj2])
    if obj1.v[-1] != 0:
        return INFEASIBLE, None, None
    for i in range(r):
        if tab.basis[i] >= m:
            col = next(j for j in range(m) if tab.rows[i][j] != 0)
            tab.pivot(i, col, [obj2])
    tab.price_out(obj2)
    status = tab.run(obj2, m, [])
    return status, list(tab.basis), tab.solution(m)


def _row_space(A, n: int) -> list[list[Fraction]]:
    """Row space basis of ``A``: the identity if ``A`` has rank ``n``, else a reduced echelon basis."""
    ech: list[tuple[int, list[Fraction]]] = []
    for row in A:
        row = list(row)
        for p, e in ech:
            if row[p]:
                f = row[p]
                row = [v - f * w for v, w in zip(row, e)]
        p = next((j for j, v in enumerate(row) if v), None)
        if p is None:
            continue
        inv = 1 / row[p]
        ech.append((p, [v * inv for v in row]))
        if len(ech) == n:
            return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return rref([e for _, e in ech])[0]


def linprog(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Maximize ``c . x`` subject to ``a_ub x <= b_ub`` and ``a_eq x = b_eq``.

    All variables are free.  Returns an :class:`LPResult`; ``x`` is an optimal
    point (or, when unbounded, some feasible point).

    The problem is solved through its dual ``min b.y, A^T y = c, y >= 0``,
    whose tableau has one row per variable instead of one per constraint.
    Coordinates are first restricted to the row space of ``A`` so the dual
    rows are independent; ``x`` is recovered from the optimal dual basis.
    """
    n = len(c)
    c = [Fraction(v) for v in c]
    A = [[Fraction(v) for v in row] for row in a_ub]
    b = [Fraction(v) for v in b_ub]
    for row, v in zip(a_eq, b_eq):
        row = [Fraction(t) for t in row]
        A.append(row)
        b.append(Fraction(v))
        A.append([-t for t in row])
        b.append(-Fraction(v))
    zero_x = (_ZERO,) * n
    if not A:
        return LPResult(UNBOUNDED, zero_x) if any(c) else LPResult(OPTIMAL, zero_x, _ZERO)
    W = _row_space(A, n)
    if len(W) == n:
        in_span, Ap = True, A
    else:
        piv = [next(j for j, v in enumerate(w) if v) for w in W]
        lam = [c[p] for p in piv]
        in_span = all(sum(l * w[j] for l, w in zip(lam, W)) == c[j] for j in range(n))
        # A x with x = W^T z becomes A' z, A' = A W^T (full column rank)
        Ap = [[sum(row[j] * w[j] for j in range(n) if w[j]) for w in W] for row in A]

    def solve_dual(cz):
        if not W:
            if any(v < 0 for v in b):
                return INFEASIBLE, None
            return OPTIMAL, zero_x
        cols = [[Ap[i][k] for i in range(len(A))] for k in range(len(W))]
        status, basis, _ = _std_simplex(cols, cz, [-v for v in b])
        if status == UNBOUNDED:
            return INFEASIBLE, None
        if status == INFEASIBLE:
            return UNBOUNDED, None
        z = solve([Ap[i] for i in basis], [b[i] for i in basis])
        x = tuple(z) if Ap is A else tuple(sum(zk * w[j] for zk, w in zip(z, W)) for j in range(n))
        return OPTIMAL, x

    if in_span and any(c):
        cz = [sum(w[j] * c[j] for j in range(n)) for w in W]
        status, x = solve_dual(cz)
        if status == OPTIMAL:
            return LPResult(OPTIMAL, x, sum(ci * xi for ci, xi in zip(c, x)))
        if status == INFEASIBLE:
            return LPResult(INFEASIBLE)
    status, x = solve_dual([_ZERO] * len(W))
    if status != OPTIMAL:
        return LPResult(INFEASIBLE)
    if any(c):
        return LPResult(UNBOUNDED, x)
    return LPResult(OPTIMAL, x, _ZERO)


def feasible_point(
    a_ub: Sequence[Sequence], b_ub: Sequence, a_eq: Sequence[Sequence] = (), b_eq: Sequence = (), nvars: int | None = None
) -> tuple[Fraction, ...] | None:
    """A point of ``{a_ub x <= b_ub, a_eq x = b_eq}`` or ``None`` if empty."""
    if nvars is None:
        nvars = len(a_ub[0]) if a_ub else len(a_eq[0])
    res = linprog([0] * nvars, a_ub, b_ub, a_eq, b_eq)
    return res.x if res.feasible else None


def strict_feasible(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """A point with ``a x < b`` componentwise, or ``None``.

    Maximizes a slack ``eps`` (capped at 1) subject to ``a x + eps <= b``.
    """
    n = len(a[0])
    a_ub = [list(r) + [1] for r in a] + [[0] * n + [1]]
    b_ub = list(b) + [1]
    res = linprog([0] * n + [1], a_ub, b_ub)
    if res.status != OPTIMAL or res.value <= 0:
        return None
    return res.x[:n]


# -- Fourier-Motzkin ---------------------------------------------------------


def _prune(rows):
    """Deduplicate and keep the tightest offset per normal direction."""
    best: dict[tuple, Fraction] = {}
    consts = []
    for a, b in rows:
        if all(v == 0 for v in a):
            consts.append((a, b))
            continue
        ints = scale_to_integers(a)
        scale = next(Fraction(x) / y for x, y in zip(a, ints) if y != 0)
        key = tuple(ints)
        bb = b / scale
        if key not in best or bb < best[key]:
            best[key] = bb
    out = [(tuple(Fraction(v) for v in k), bb) for k, bb in best.items()]
    if any(b < 0 for _, b in consts):
        n = len(rows[0][0])
        out.append((tuple([Fraction(0)] * n), Fraction(-1)))
    return out


def fm_eliminate(rows, k: int):
    """Eliminate variable ``k`` from inequalities ``a . x <= b``."""
    pos, neg, zero = [], [], []
    for a, b in rows:
        (pos if a[k] > 0 else neg if a[k] < 0 else zero).append((a, b))
    out = list(zero)
    for ap, bp in pos:
        for an, bn in neg:
            fp, fn = -an[k], ap[k]
            a = tuple(fp * x + fn * y for x, y in zip(ap, an))
            out.append((a, fp * bp + fn * bn))
    return _prune(out) if out else out


def fm_project(rows, keep: Sequence[int], nvars: int):
    """Project ``{a . x <= b}`` onto the coordinates ``keep`` (in that order)."""
    rows = [(tuple(Fraction(v) for v in a), Fraction(b)) for a, b in rows]
    for k in range(nvars):
        if k not in keep:
            rows = fm_eliminate(rows, k)
    return [(tuple(a[i] for i in keep), b) for a, b in rows]


def fm_is_empty(rows, nvars: int) -> bool:
    """Emptiness of ``{a . x <= b}`` by eliminating every variable."""
    rows = [(tuple(Fraction(v) for v in a), Fraction(b)) for a, b in rows]
    for k in range(nvars):
        rows = fm_eliminate(rows, k)
    return any(b < 0 for _, b in rows)
