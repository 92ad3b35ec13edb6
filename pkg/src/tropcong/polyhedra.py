"""Exact rational polyhedra, cones and Euclidean projections.

A half-space ``{x : a.x + b <= 0}`` keeps a primitive integer normal ``a`` and a
rational offset ``b``.  Nearest points are found by enumerating candidate
active sets and solving the KKT system exactly, so every projection comes with
rational coordinates and exact squared distances.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, PreconditionError
from .exact import ceil_sqrt, dot, primitive, rank, scale_to_integers, solve, to_fraction
from .kernels import CellSet, PointBatch
from .lp import INFEASIBLE, OPTIMAL, linprog

_ZERO = Fraction(0)


@dataclass(frozen=True)
class HalfSpace:
    """``{x : normal . x + offset <= 0}``, normal stored primitive."""

    normal: tuple[int, ...]
    offset: Fraction

    def __init__(self, normal: Sequence, offset=0):
        offset = to_fraction(offset)
        try:
            prim, scale = primitive([to_fraction(v) for v in normal])
        except ValueError:
            raise PreconditionError("half-space normal must be nonzero") from None
        object.__setattr__(self, "normal", prim)
        object.__setattr__(self, "offset", offset / scale)

    @property
    def nvars(self) -> int:
        return len(self.normal)

    def value(self, x: Sequence) -> Fraction:
        return sum((a * v for a, v in zip(self.normal, x) if a), Fraction(self.offset))

    def contains(self, x: Sequence) -> bool:
        return self.value(x) <= 0


@dataclass(frozen=True)
class Polyhedron:
    """Intersection of finitely many closed half-spaces (none means the whole space)."""

    nvars: int
    halfspaces: tuple[HalfSpace, ...] = ()

    def __init__(self, nvars: int, halfspaces: Iterable[HalfSpace] = ()):
        hs = tuple(halfspaces)
        for h in hs:
            if h.nvars != nvars:
                raise DimensionError(f"half-space in {h.nvars} variables, expected {nvars}")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "halfspaces", hs)

    @classmethod
    def whole(cls, nvars: int) -> "Polyhedron":
        return cls(nvars)

    @classmethod
    def empty(cls, nvars: int) -> "Polyhedron":
        e = [1] + [0] * (nvars - 1)
        return cls(nvars, [HalfSpace(e, 1), HalfSpace([-v for v in e], 0)])

    @classmethod
    def point(cls, x: Sequence) -> "Polyhedron":
        x = [to_fraction(v) for v in x]
        hs = []
        for i, v in enumerate(x):
            e = [0] * len(x)
            e[i] = 1
            hs.append(HalfSpace(e, -v))
            e[i] = -1
            hs.append(HalfSpace(e, v))
        return cls(len(x), hs)

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "Polyhedron":
        hs = []
        for i, (a, b) in enumerate(zip(lo, hi)):
            e = [0] * len(lo)
            e[i] = 1
            hs.append(HalfSpace(e, -to_fraction(b)))
            e[i] = -1
            hs.append(HalfSpace(e, to_fraction(a)))
        return cls(len(lo), hs)

    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        if other.nvars != self.nvars:
            raise DimensionError("dimension mismatch")
        return Polyhedron(self.nvars, self.halfspaces + other.halfspaces)

    def ub_rows(self) -> tuple[list[list[int]], list[Fraction]]:
        """Constraints as ``A x <= b``."""
        return [list(h.normal) for h in self.halfspaces], [-h.offset for h in self.halfspaces]

    def contains(self, x: Sequence) -> bool:
        return all(h.contains(x) for h in self.halfspaces)

    def is_cone(self) -> bool:
        return all(h.offset == 0 for h in self.halfspaces)

    def __len__(self) -> int:
        return len(self.halfspaces)


@dataclass(frozen=True)
class PolyhedralUnion:
    """Finite union of polyhedra in a common space (no pieces means the empty set)."""

    nvars: int
    pieces: tuple[Polyhedron, ...] = ()

    def __init__(self, nvars: int, pieces: Iterable[Polyhedron] = ()):
        ps = tuple(pieces)
        for p in ps:
            if p.nvars != nvars:
                raise DimensionError(f"piece in {p.nvars} variables, expected {nvars}")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "pieces", ps)

    def contains(self, x: Sequence) -> bool:
        return any(p.contains(x) for p in self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)


@dataclass(frozen=True)
class ConeV:
    """``Cone(S)``: nonnegative combinations of integer generators."""

    nvars: int
    generators: tuple[tuple[int, ...], ...] = ()

    def __init__(self, nvars: int, generators: Iterable[Sequence[int]] = ()):
        gens = tuple(tuple(int(v) for v in g) for g in generators)
        for g in gens:
            if len(g) != nvars:
                raise DimensionError(f"generator {g} has length {len(g)}, expected {nvars}")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "generators", gens)


def _point(n: int, x: Sequence) -> tuple[Fraction, ...]:
    if len(x) != n:
        raise DimensionError(f"point has length {len(x)}, expected {n}")
    return tuple(to_fraction(v) for v in x)


# -- feasibility ---------------------------------------------------------------


def find_point(P: Polyhedron) -> tuple[Fraction, ...] | None:
    """Some rational point of ``P`` (a basic solution), or ``None`` when empty."""
    if not P.halfspaces:
        return (_ZERO,) * P.nvars
    a, b = P.ub_rows()
    res = linprog([0] * P.nvars, a, b)
    return None if res.status == INFEASIBLE else res.x


def is_empty(P: Polyhedron) -> bool:
    return find_point(P) is None


def contains(S: Polyhedron | PolyhedralUnion, x: Sequence) -> bool:
    return S.contains(_point(S.nvars, x))


def prune_empty(U: PolyhedralUnion) -> PolyhedralUnion:
    return PolyhedralUnion(U.nvars, [p for p in U.pieces if not is_empty(p)])


def maximize(P: Polyhedron, c: Sequence):
    """Exact LP over ``P``; returns the solver result."""
    a, b = P.ub_rows()
    return linprog(list(c), a, b)


# -- cones ---------------------------------------------------------------------


def polar_cone(c: ConeV) -> Polyhedron:
    """``{y : g . y <= 0 for every generator g}``."""
    return Polyhedron(c.nvars, [HalfSpace(g, 0) for g in c.generators if any(g)])


def cone_contains(c: ConeV, y: Sequence) -> bool:
    """Exact membership ``y in Cone(generators)`` by LP feasibility."""
    y = _point(c.nvars, y)
    gens = [g for g in c.generators if any(g)]
    if not gens:
        return all(v == 0 for v in y)
    m = len(gens)
    a_eq = [[g[k] for g in gens] for k in range(c.nvars)]
    a_ub = [[-int(i == j) for j in range(m)] for i in range(m)]
    res = linprog([0] * m, a_ub, [0] * m, a_eq, list(y))
    return res.status != INFEASIBLE


def _in_cone_plus_span(r, rays, lineality) -> bool:
    n = len(r)
    cols = list(rays) + list(lineality)
    if not cols:
        return all(v == 0 for v in r)
    m = len(cols)
    a_eq = [[col[k] for col in cols] for k in range(n)]
    a_ub = [[-int(i == j) for j in range(m)] for i in range(len(rays))]
    res = linprog([0] * m, a_ub, [0] * len(rays), a_eq, list(r))
    return res.status != INFEASIBLE


def _prim(v) -> tuple[int, ...]:
    return primitive(v)[0]


def cone_h_to_v(K: Polyhedron) -> ConeV:
    """Generators of the cone ``{y : A y <= 0}`` by double description.

    Inequalities are inserted one at a time.  The cone is tracked as a
    lineality basis plus a list of rays; the lineality space appears in the
    output as opposite pairs of generators.
    """
    if not K.is_cone():
        raise PreconditionError("cone_h_to_v needs all offsets equal to zero")
    n = K.nvars
    lineality = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    rays: list[tuple[Fraction, ...]] = []
    for h in K.halfspaces:
        a = h.normal
        pi = next((i for i, l in enumerate(lineality) if dot(a, l) != 0), None)
        if pi is not None:
            pivot = lineality[pi]
            ap = dot(a, pivot)
            if ap > 0:
                pivot = tuple(-v for v in pivot)
                ap = -ap
            new_lin = []
            for i, l in enumerate(lineality):
                if i == pi:
                    continue
                al = dot(a, l)
                new_lin.append(tuple(u - al / ap * p for u, p in zip(l, pivot)) if al else l)
            new_rays = []
            for r in rays:
                ar = dot(a, r)
                new_rays.append(tuple(u - ar / ap * p for u, p in zip(r, pivot)) if ar else r)
            new_rays.append(pivot)
            lineality = [l for l in new_lin if any(l)]
            rays = [r for r in new_rays if any(r)]
        else:
            pos = [r for r in rays if dot(a, r) > 0]
            keep = [r for r in rays if dot(a, r) <= 0]
            combos = []
            for p in pos:
                ap = dot(a, p)
                for q in keep:
                    aq = dot(a, q)
                    if aq < 0:
                        combos.append(tuple(ap * u - aq * w for u, w in zip(q, p)))
            rays = keep + [c for c in combos if any(c)]
        # normalize, dedupe and drop redundant rays
        uniq: list[tuple[int, ...]] = []
        for r in rays:
            pr = _prim(r)
            if pr not in uniq:
                uniq.append(pr)
        lin_int = [_prim(l) for l in lineality]
        lineality = [tuple(Fraction(v) for v in l) for l in lin_int]
        kept: list[tuple[int, ...]] = []
        for i, r in enumerate(uniq):
            others = kept + uniq[i + 1:]
            if not _in_cone_plus_span(r, others, lin_int):
                kept.append(r)
        rays = [tuple(Fraction(v) for v in r) for r in kept]
    gens = [_prim(r) for r in rays]
    for l in lineality:
        p = _prim(l)
        gens.append(p)
        gens.append(tuple(-v for v in p))
    return ConeV(n, gens)


# -- projections -----------------------------------------------------------------


def _independent_subsets(rows: Sequence[Sequence[int]], n: int):
    m = len(rows)
    for size in range(1, min(n, m) + 1):
        for S in itertools.combinations(range(m), size):
            sub = [rows[i] for i in S]
            if rank(sub) == size:
                yield S


def _gram(A_S):
    return [[Fraction(dot(a, b)) for b in A_S] for a in A_S]


def nearest_point(P: Polyhedron, x: Sequence) -> tuple[tuple[Fraction, ...], tuple[int, ...]]:
    """Euclidean projection of ``x`` onto ``P`` and the constraints active there.

    Tries candidate active sets of linearly independent normals in order of size;
    the first one whose multipliers are nonnegative and whose foot point lies in
    ``P`` satisfies the KKT conditions, hence is the unique nearest point.
    """
    x = _point(P.nvars, x)
    hs = P.halfspaces
    if P.contains(x):
        return x, tuple(i for i, h in enumerate(hs) if h.value(x) == 0)
    if is_empty(P):
        raise PreconditionError("nearest point onto an empty polyhedron")
    rows = [h.normal for h in hs]
    for S in _independent_subsets(rows, P.nvars):
        A_S = [rows[i] for i in S]
        rhs = [hs[i].value(x) for i in S]
        lam = solve(_gram(A_S), rhs)
        if lam is None or any(v < 0 for v in lam):
            continue
        y = tuple(
            xk - sum((l * a[k] for l, a in zip(lam, A_S)), _ZERO) for k, xk in enumerate(x)
        )
        if P.contains(y):
            return y, tuple(i for i, h in enumerate(hs) if h.value(y) == 0)
    raise AssertionError("no KKT active set found")  # unreachable for nonempty P


def project_onto_cone(K: Polyhedron, x: Sequence) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Split ``x = y + z`` with ``y`` in ``K``, ``z`` in the polar cone and ``y . z = 0``."""
    if not K.is_cone():
        raise PreconditionError("project_onto_cone needs all offsets equal to zero")
    x = _point(K.nvars, x)
    y, _ = nearest_point(K, x)
    return y, tuple(a - b for a, b in zip(x, y))


@dataclass(frozen=True)
class Decomposition:
    """``x = w + sum_i multipliers[i] * normal_i`` with ``w`` the nearest point of ``K``."""

    w: tuple[Fraction, ...]
    active: tuple[int, ...]
    multipliers: dict[int, Fraction] = field(default_factory=dict)


def cone_combination(vectors: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Nonnegative coefficients ``c`` with ``sum c_i v_i = target``, or ``None``."""
    n = len(target)
    m = len(vectors)
    if m == 0:
        return [] if all(v == 0 for v in target) else None
    a_eq = [[v[k] for v in vectors] for k in range(n)]
    a_ub = [[-int(i == j) for j in range(m)] for i in range(m)]
    res = linprog([0] * m, a_ub, [0] * m, a_eq, list(target))
    if res.status == INFEASIBLE:
        return None
    return list(res.x)


def decompose_point(K: Polyhedron, x: Sequence) -> Decomposition:
    """Nearest point ``w`` plus an LP certificate that ``x - w`` lies in the active normal cone."""
    x = _point(K.nvars, x)
    w, active = nearest_point(K, x)
    diff = [a - b for a, b in zip(x, w)]
    coeffs = cone_combination([K.halfspaces[i].normal for i in active], diff)
    if coeffs is None:
        raise AssertionError("projection residual is not in the active normal cone")
    return Decomposition(w, active, {i: c for i, c in zip(active, coeffs)})


def check_decomposition(K: Polyhedron, x: Sequence, d: Decomposition) -> bool:
    """Exact replay of a :class:`Decomposition` certificate."""
    x = _point(K.nvars, x)
    if not K.contains(d.w):
        return False
    if set(d.active) != {i for i, h in enumerate(K.halfspaces) if h.value(d.w) == 0}:
        return False
    if any(c < 0 for c in d.multipliers.values()) or not set(d.multipliers) <= set(d.active):
        return False
    recon = [
        wk + sum((c * K.halfspaces[i].normal[k] for i, c in d.multipliers.items()), _ZERO)
        for k, wk in enumerate(d.w)
    ]
    return recon == list(x)


def dist_sq(P: Polyhedron, x: Sequence) -> Fraction:
    y, _ = nearest_point(P, x)
    return sum(((a - b) ** 2 for a, b in zip(x, y)), _ZERO)


def union_dist_sq(x: Sequence, V: PolyhedralUnion) -> Fraction:
    """Exact squared Euclidean distance to a nonempty union."""
    x = _point(V.nvars, x)
    best = None
    for P in V.pieces:
        if is_empty(P):
            continue
        d = dist_sq(P, x)
        if best is None or d < best:
            best = d
            if d == 0:
                break
    if best is None:
        raise PreconditionError("distance to the empty set")
    return best


def union_dist(x: Sequence, V: PolyhedralUnion) -> float:
    """Floating Euclidean distance, for reporting only."""
    return math.sqrt(union_dist_sq(x, V))


class DistanceField:
    """Exact squared distances from many points to one polyhedron.

    For each feasible active set ``S`` the KKT multipliers and the foot point are
    affine in ``x``; the region where they are valid is a polyhedron in ``x``.
    Points are sorted into these regions in one batched pass, after which each
    squared distance is ``lam^T G lam``.
    """

    def __init__(self, P: Polyhedron):
        if is_empty(P):
            raise PreconditionError("distance to an empty polyhedron")
        self.P = P
        n = P.nvars
        hs = P.halfspaces
        rows = [h.normal for h in hs]
        cells = [[([-a for a in h.normal], -h.offset) for h in hs]]
        faces = [None]
        for S in _independent_subsets(rows, n):
            A_S = [rows[i] for i in S]
            G = _gram(A_S)
            size = len(S)
            # Ginv columns via solves
            cols = [solve(G, [Fraction(int(i == j)) for i in range(size)]) for j in range(size)]
            Ginv = [[cols[j][i] for j in range(size)] for i in range(size)]
            # lam(x) = L x + l0
            L = [[sum((Ginv[i][j] * A_S[j][k] for j in range(size)), _ZERO) for k in range(n)] for i in range(size)]
            l0 = [sum((Ginv[i][j] * hs[S[j]].offset for j in range(size)), _ZERO) for i in range(size)]
            cell = [(L[i], l0[i]) for i in range(size)]
            # y(x) = x - A_S^T lam(x) = M x + m0
            M = [
                [Fraction(int(r == k)) - sum((A_S[i][r] * L[i][k] for i in range(size)), _ZERO) for k in range(n)]
                for r in range(n)
            ]
            m0 = [-sum((A_S[i][r] * l0[i] for i in range(size)), _ZERO) for r in range(n)]
            for h in hs:
                a = [-sum((h.normal[r] * M[r][k] for r in range(n)), _ZERO) for k in range(n)]
                b = -(sum((h.normal[r] * m0[r] for r in range(n)), _ZERO) + h.offset)
                cell.append((a, b))
            region = Polyhedron(n, [HalfSpace([-v for v in a], -b) for a, b in cell if any(a)])
            if any(not any(a) and b < 0 for a, b in cell) or is_empty(region):
                continue
            cells.append(cell)
            faces.append((S, G, L, l0))
        self.faces = faces
        self.cells = CellSet(cells, n)

    def dist_sq_many(self, points: Sequence[Sequence]) -> list[Fraction]:
        batch = PointBatch(points)
        where = self.cells.locate(batch)
        out = []
        for x, c in zip(batch.points, where):
            if c == 0:
                out.append(_ZERO)
                continue
            if c < 0:  # not expected; fall back to the direct solver
                out.append(dist_sq(self.P, x))
                continue
            S, G, L, l0 = self.faces[c]
            lam = [sum((a * v for a, v in zip(row, x)), b) for row, b in zip(L, l0)]
            out.append(sum((lam[i] * G[i][j] * lam[j] for i in range(len(lam)) for j in range(len(lam))), _ZERO))
        return out


def union_dist_sq_many(V: PolyhedralUnion, points: Sequence[Sequence]) -> list[Fraction]:
    fields = [DistanceField(P) for P in V.pieces if not is_empty(P)]
    if not fields:
        raise PreconditionError("distance to the empty set")
    best = None
    for F in fields:
        d = F.dist_sq_many(points)
        best = d if best is None else [min(a, b) for a, b in zip(best, d)]
    return best


# -- vertices and sampling -------------------------------------------------------


def irredundant(P: Polyhedron) -> Polyhedron:
    """Drop duplicate half-spaces and those implied by the remaining ones (one LP each)."""
    hs = list(dict.fromkeys(P.halfspaces))
    i = 0
    while i < len(hs):
        others = hs[:i] + hs[i + 1:]
        if others:
            a = [list(o.normal) for o in others]
            b = [-o.offset for o in others]
            res = linprog(list(hs[i].normal), a, b)
            if res.status == INFEASIBLE:
                return P
            if res.status == OPTIMAL and res.value + hs[i].offset <= 0:
                hs = others
                continue
        i += 1
    return Polyhedron(P.nvars, hs)


def face_points(P: Polyhedron) -> list[tuple[Fraction, ...]]:
    """One point on every nonempty face cut out by at most ``nvars`` tight constraints.

    Includes all vertices when ``P`` has any; always nonempty for nonempty ``P``.
    Redundant constraints are removed first and supersets of infeasible
    active sets are skipped.
    """
    n = P.nvars
    p0 = find_point(P)
    if p0 is None:
        return []
    out: list[tuple[Fraction, ...]] = [p0]
    a, b = irredundant(P).ub_rows()
    dead: list[frozenset] = []
    for S in _independent_subsets(a, n):
        fs = frozenset(S)
        if any(d <= fs for d in dead):
            continue
        res = linprog([0] * n, a, b, [a[i] for i in S], [b[i] for i in S])
        if res.status == INFEASIBLE:
            dead.append(fs)
        elif res.x not in out:
            out.append(res.x)
    return out


def vertices(P: Polyhedron) -> list[tuple[Fraction, ...]]:
    """Vertices of ``P`` (empty when ``P`` is empty or contains a line)."""
    a, b = P.ub_rows()
    n = P.nvars
    out = []
    for S in itertools.combinations(range(len(a)), n):
        A_S = [a[i] for i in S]
        y = solve(A_S, [b[i] for i in S])
        if y is not None and P.contains(y):
            y = tuple(y)
            if y not in out:
                out.append(y)
    return out


def random_rational(rng: random.Random, lo: int, hi: int, den: int = 12) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def random_point(rng: random.Random, n: int, box: int = 10, den: int = 12) -> tuple[Fraction, ...]:
    out = []
    for _ in range(n):
        d = rng.randint(1, den)
        out.append(Fraction(rng.randint(-box * d, box * d), d))
    return tuple(out)


def sample_points(P: Polyhedron, rng: random.Random, count: int, box: int = 10) -> list[tuple[Fraction, ...]]:
    """Random rational points of ``P``: convex combinations of LP optima inside a box."""
    n = P.nvars
    Q = P.intersect(Polyhedron.box([-box] * n, [box] * n))
    base = find_point(Q)
    if base is None:
        base = find_point(P)
        return [] if base is None else [base] * min(count, 1)
    a, b = Q.ub_rows()
    anchors = [base]
    for _ in range(min(2 * n + 2, 8)):
        c = [rng.randint(-5, 5) for _ in range(n)]
        res = linprog(c, a, b)
        if res.status == OPTIMAL and res.x not in anchors:
            anchors.append(res.x)
    out = []
    for _ in range(count):
        k = rng.randint(1, len(anchors))
        chosen = rng.sample(anchors, k)
        wts = [rng.randint(0, 6) for _ in chosen]
        if sum(wts) == 0:
            wts[0] = 1
        tot = sum(wts)
        out.append(tuple(sum((Fraction(w, tot) * p[k2] for w, p in zip(wts, chosen)), _ZERO) for k2 in range(n)))
    return out


# -- distance constant -------------------------------------------------------------


def _pointing_functional(gens: Sequence[Sequence[int]]) -> tuple[Fraction, ...] | None:
    """``u`` with ``u . g <= -1`` for every generator, or ``None`` if the cone has a line."""
    n = len(gens[0])
    res = linprog([0] * n, [list(g) for g in gens], [-1] * len(gens))
    return None if res.status == INFEASIBLE else res.x


def _positive_circuit(gens: Sequence[Sequence[int]]) -> list[Fraction] | None:
    n, m = len(gens[0]), len(gens)
    a_eq = [[g[k] for g in gens] for k in range(n)] + [[1] * m]
    b_eq = [0] * n + [1]
    a_ub = [[-int(i == j) for j in range(m)] for i in range(m)]
    res = linprog([0] * m, a_ub, [0] * m, a_eq, b_eq)
    return None if res.status == INFEASIBLE else list(res.x)


def _pointed_constant(gens: Sequence[Sequence[int]], u: Sequence[Fraction]) -> Fraction:
    # cross-section points v_i with u . v_i = -1
    pts = [[Fraction(v) / -dot(u, g) for v in g] for g in gens]
    r = ceil_sqrt(max(sum((v * v for v in p), _ZERO) for p in pts))
    # D' = min over conv(pts) of max_j g_j . v, as an LP in (mu, s): maximize -s
    m = len(pts)
    a_ub = []
    b_ub = []
    for g in gens:
        # g . (sum mu_i p_i) - s <= 0
        a_ub.append([dot(g, p) for p in pts] + [-1])
        b_ub.append(0)
    for i in range(m):
        a_ub.append([-int(i == j) for j in range(m)] + [0])
        b_ub.append(0)
    res = linprog([0] * m + [-1], a_ub, b_ub, [[1] * m + [0]], [1])
    d = -res.value
    if res.status != OPTIMAL or d <= 0:
        raise AssertionError("cross-section optimum must be positive")
    return r / d


def distance_constant(c: ConeV) -> Fraction:
    """A rational ``k`` with ``|y| <= k * max_i g_i . y`` on ``Cone(g_1, ..., g_m)``.

    Pointed cones are handled through a compact cross-section.  A cone with a
    positive circuit ``sum c_i g_i = 0`` is covered by the subcones that each drop
    one generator from the circuit's support, recursively.
    """
    gens = sorted({g for g in c.generators if any(g)})
    if not gens:
        raise PreconditionError("distance_constant needs a nonzero generator")
    memo: dict[tuple, Fraction] = {}

    def solve_for(idx: tuple[int, ...]) -> Fraction:
        if idx in memo:
            return memo[idx]
        sub = [gens[i] for i in idx]
        u = _pointing_functional(sub)
        if u is not None:
            k = _pointed_constant(sub, u)
        else:
            circ = _positive_circuit(sub)
            support = [idx[j] for j, v in enumerate(circ) if v > 0]
            k = max(solve_for(tuple(i for i in idx if i != drop)) for drop in support)
        memo[idx] = k
        return k

    return solve_for(tuple(range(len(gens))))


def check_distance_constant(c: ConeV, k: Fraction, y: Sequence) -> bool:
    """Exact test of ``y . y <= k^2 * (max_i g_i . y)^2`` with ``max_i g_i . y >= 0``."""
    m = max(dot(g, y) for g in c.generators if any(g))
    return m >= 0 and dot(y, y) <= k * k * m * m


def integer_normal(row: Sequence) -> tuple[int, ...]:
    return tuple(scale_to_integers(row))


class UnionIndex:
    """Batched exact membership for a polyhedral union."""

    def __init__(self, V: PolyhedralUnion):
        self.V = V
        cells = [[([-a for a in h.normal], -h.offset) for h in P.halfspaces] for P in V.pieces]
        self.cells = CellSet(cells, V.nvars)

    def piece_of(self, points: Sequence[Sequence] | PointBatch) -> list[int]:
        batch = points if isinstance(points, PointBatch) else PointBatch(points)
        return self.cells.locate(batch)

    def contains_many(self, points: Sequence[Sequence] | PointBatch) -> list[bool]:
        return [i >= 0 for i in self.piece_of(points)]
