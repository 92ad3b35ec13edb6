"""Embedded one-dimensional rational complexes and chart functions on them.

Edges are parametrized by lattice length: a segment from ``p`` to ``q`` is
``p + s*u`` for ``0 <= s <= L`` with ``u`` primitive, and a ray is ``p + s*u``
for ``s >= 0``.  Restricting a tropical rational function to an edge gives an
exact piecewise-linear function of ``s`` with integer slopes.

The chart constructions (ray bump, segment tent, vertex star) are assembled
from cone bumps: for an apex ``a`` and primitive direction ``l``,
``max(0, h - k g)`` with ``g`` vanishing exactly on the line ``a + R l`` and
``h = max(0, l'.(X - a))``, where ``l.l' = 1``.  The bump equals ``s`` along
``a + s l`` and vanishes outside a thin cone around that ray.
"""

from __future__ import annotations

import itertools
import math
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, InconclusiveError, PreconditionError
from .exact import dot, nullspace, primitive, rref, scale_to_integers, to_fraction
from .lp import INFEASIBLE, OPTIMAL, linprog
from .tropical import (
    TropicalPoly,
    TropicalRational,
    poly_add,
    poly_pow,
    rat_add,
    rat_eval,
    rat_inv,
    rat_min,
    rat_mul,
)

_ZERO = Fraction(0)


def lattice_length(p: Sequence, q: Sequence) -> Fraction:
    """``lam`` with ``q - p = lam * u`` for a primitive integer ``u`` (0 when ``p == q``)."""
    if len(p) != len(q):
        raise DimensionError("points of different dimension")
    d = [to_fraction(b) - to_fraction(a) for a, b in zip(p, q)]
    if not any(d):
        return _ZERO
    return primitive(d)[1]


@dataclass(frozen=True)
class Edge:
    kind: str  # "segment" or "ray"
    index: int  # index within its kind
    start: int  # vertex index at s = 0
    end: int | None  # vertex index at s = length (segments only)
    origin: tuple[Fraction, ...]
    direction: tuple[int, ...]
    length: Fraction | None  # None for rays

    def point(self, s) -> tuple[Fraction, ...]:
        return tuple(o + s * u for o, u in zip(self.origin, self.direction))

    @property
    def label(self) -> str:
        return f"{self.kind} {self.index}"


@dataclass
class CurveComplex:
    """Vertices, bounded segments and rays with primitive directions in ``Q^n``.

    Construction validates distinct vertices, distinct segment endpoints,
    primitive ray directions and that edges meet only in shared vertices.
    Connectivity is reported by :func:`check_geometric_conditions`.
    """

    nvars: int
    vertices: list[tuple[Fraction, ...]]
    segments: list[tuple[int, int]] = field(default_factory=list)
    rays: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    def __post_init__(self):
        n = self.nvars
        if n < 1:
            raise PreconditionError("nvars must be positive")
        verts = []
        for v in self.vertices:
            if len(v) != n:
                raise DimensionError(f"vertex {v} has length {len(v)}, expected {n}")
            verts.append(tuple(to_fraction(x) for x in v))
        if len(set(verts)) != len(verts):
            raise PreconditionError("duplicate vertex coordinates")
        self.vertices = verts
        segs = []
        for i, j in self.segments:
            i, j = int(i), int(j)
            self._check_vertex(i)
            self._check_vertex(j)
            if i == j:
                raise PreconditionError(f"segment ({i}, {j}) has equal endpoints")
            segs.append((i, j))
        self.segments = segs
        rays = []
        for b, d in self.rays:
            b = int(b)
            self._check_vertex(b)
            d = tuple(int(x) for x in d)
            if len(d) != n:
                raise DimensionError(f"ray direction {d} has length {len(d)}, expected {n}")
            if not any(d) or math.gcd(*d) != 1:
                raise PreconditionError(f"ray direction {d} is not primitive")
            rays.append((b, d))
        self.rays = rays
        self._edges = None
        self._validate_intersections()

    def _check_vertex(self, i: int) -> None:
        if not 0 <= i < len(self.vertices):
            raise PreconditionError(f"vertex index {i} out of range")

    def edges(self) -> list[Edge]:
        if self._edges is None:
            out = []
            for k, (i, j) in enumerate(self.segments):
                p, q = self.vertices[i], self.vertices[j]
                u, lam = primitive([b - a for a, b in zip(p, q)])
                out.append(Edge("segment", k, i, j, p, u, lam))
            for k, (b, d) in enumerate(self.rays):
                out.append(Edge("ray", k, b, None, self.vertices[b], d, None))
            self._edges = out
        return self._edges

    def edge_vertices(self, e: Edge) -> set[int]:
        return {e.start} if e.end is None else {e.start, e.end}

    def incident(self, v: int) -> list[tuple[Edge, tuple[int, ...], bool]]:
        """Edges at vertex ``v`` with the outgoing direction and whether ``v`` is the start."""
        out = []
        for e in self.edges():
            if e.start == v:
                out.append((e, e.direction, True))
            elif e.end == v:
                out.append((e, tuple(-x for x in e.direction), False))
        return out

    def _validate_intersections(self) -> None:
        edges = self.edges()
        for a, b in itertools.combinations(edges, 2):
            shared = self.edge_vertices(a) & self.edge_vertices(b)
            inter = _edge_edge_params(a, b)
            if inter is None:
                continue
            lo, hi = inter
            if hi is None or lo != hi:
                raise PreconditionError(f"{a.label} and {b.label} overlap")
            pt = a.point(lo)
            if not any(self.vertices[v] == pt for v in shared):
                raise PreconditionError(f"{a.label} and {b.label} cross outside a shared vertex")
        for vi, v in enumerate(self.vertices):
            for e in edges:
                if vi in self.edge_vertices(e):
                    continue
                if _point_param(e, v) is not None:
                    raise PreconditionError(f"vertex {vi} lies inside {e.label}; subdivide first")


def _point_param(e: Edge, x: Sequence) -> Fraction | None:
    """Parameter ``s`` with ``e.point(s) == x`` inside the edge's range, else ``None``."""
    d = [a - b for a, b in zip(x, e.origin)]
    k = next(i for i, u in enumerate(e.direction) if u)
    s = d[k] / e.direction[k]
    if any(s * u != dd for u, dd in zip(e.direction, d)):
        return None
    if s < 0 or (e.length is not None and s > e.length):
        return None
    return s


def _edge_edge_params(a: Edge, b: Edge):
    """Parameter interval ``(lo, hi)`` on ``a`` of ``a`` intersected with ``b`` (``hi`` None = unbounded)."""
    n = len(a.origin)
    # solve a.origin + s a.dir = b.origin + t b.dir
    rows = [[a.direction[k], -b.direction[k]] for k in range(n)]
    rhs = [b.origin[k] - a.origin[k] for k in range(n)]
    m, piv = rref([r + [c] for r, c in zip(rows, rhs)])
    if 2 in piv:
        return None  # inconsistent
    if piv == [0, 1]:
        s, t = m[0][2], m[1][2]
        if s < 0 or t < 0:
            return None
        if a.length is not None and s > a.length:
            return None
        if b.length is not None and t > b.length:
            return None
        return s, s
    # parallel and collinear: s ranges over a's interval intersected with b's preimage
    lo, hi = _ZERO, a.length
    # t as a function of s: t = t0 + r s
    k = next(i for i, u in enumerate(b.direction) if u)
    r = Fraction(a.direction[k], b.direction[k])
    t0 = (a.origin[k] - b.origin[k]) / b.direction[k]
    bounds = [(r, t0, _ZERO, True)]  # t >= 0
    if b.length is not None:
        bounds.append((r, t0, b.length, False))  # t <= L
    for rr, c, lim, lower in bounds:
        # lower: rr s + c >= lim ; upper: rr s + c <= lim
        if not lower:
            rr, c, lim = -rr, -c, -lim
        # rr s >= lim - c
        val = (lim - c) / rr
        if rr > 0:
            lo = max(lo, val)
        else:
            hi = val if hi is None else min(hi, val)
    if hi is not None and lo > hi:
        return None
    return lo, hi


# -- geometric checks -----------------------------------------------------------------


def check_ray_directions(C: CurveComplex) -> list[tuple[int, int]]:
    """Pairs ``(i, j)``, ``i < j``, of rays with the same primitive direction."""
    out = []
    for (i, (_, d1)), (j, (_, d2)) in itertools.combinations(enumerate(C.rays), 2):
        if d1 == d2:
            out.append((i, j))
    return out


def components(C: CurveComplex) -> list[list[int]]:
    parent = list(range(len(C.vertices)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in C.segments:
        parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for v in range(len(C.vertices)):
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


@dataclass
class GeometricReport:
    connected: bool
    components: int
    dimension: int
    ray_pairs: list[tuple[int, int]]
    not_checked: list[str]

    @property
    def ok(self) -> bool:
        return self.connected and not self.ray_pairs


def check_geometric_conditions(C: CurveComplex) -> GeometricReport:
    """Connectivity, dimension (0 or 1) and uniqueness of ray directions.

    The two congruence-theoretic conditions on the coordinate ring are not
    decided here and are listed under ``not_checked``.
    """
    comps = components(C)
    dim = 1 if (C.segments or C.rays) else 0
    return GeometricReport(
        connected=len(comps) <= 1,
        components=len(comps),
        dimension=dim,
        ray_pairs=check_ray_directions(C),
        not_checked=["coordinate semifield generation", "congruence finite generation"],
    )


# -- restriction to edges ---------------------------------------------------------------


def _envelope_points(lines: list[tuple[Fraction, int]], lo: Fraction, hi: Fraction | None) -> list[Fraction]:
    """Parameters in ``(lo, hi)`` where the upper envelope of ``a + b s`` may bend."""
    pts = set()
    for (a1, b1), (a2, b2) in itertools.combinations(set(lines), 2):
        if b1 != b2:
            s = (a2 - a1) / (b1 - b2)
            if s > lo and (hi is None or s < hi):
                pts.add(s)
    return sorted(pts)


def _edge_lines(p: TropicalPoly, e: Edge) -> list[tuple[Fraction, int]]:
    return [(c + dot(exps, e.origin), sum(x * u for x, u in zip(exps, e.direction))) for exps, c in p.terms.items()]


def _env_value(lines, s):
    return max(a + b * s for a, b in lines)


@dataclass
class EdgeProfile:
    """Exact piecewise-linear ``s -> f(origin + s u)`` on one edge."""

    edge: Edge
    knots: list[Fraction]  # includes 0 and, for segments, the length
    values: list[Fraction]
    tail_slope: int | None  # slope beyond the last knot, rays only

    def slopes(self) -> list[Fraction]:
        out = []
        for (s0, v0), (s1, v1) in zip(zip(self.knots, self.values), zip(self.knots[1:], self.values[1:])):
            out.append((v1 - v0) / (s1 - s0))
        if self.tail_slope is not None:
            out.append(Fraction(self.tail_slope))
        return out

    def value(self, s) -> Fraction:
        s = to_fraction(s)
        k = self.knots
        if s < 0 or (self.edge.length is not None and s > self.edge.length):
            raise ValueError("parameter outside the edge")
        for i in range(len(k) - 1):
            if k[i] <= s <= k[i + 1]:
                return self.values[i] + (self.values[i + 1] - self.values[i]) * (s - k[i]) / (k[i + 1] - k[i])
        return self.values[-1] + self.tail_slope * (s - k[-1])

    def minimum(self):
        m = min(self.values)
        if self.tail_slope is not None and self.tail_slope < 0:
            return None  # unbounded below
        return m


@dataclass
class PLFunctionOnComplex:
    f: TropicalRational
    complex: CurveComplex
    profiles: list[EdgeProfile]

    def integer_slopes(self) -> bool:
        return all(s.denominator == 1 for p in self.profiles for s in p.slopes())

    def continuous(self) -> bool:
        """Values at shared vertices agree across all incident edges and with direct evaluation."""
        for vi, v in enumerate(self.complex.vertices):
            direct = rat_eval(self.f, v)
            for p in self.profiles:
                e = p.edge
                if e.start == vi and p.values[0] != direct:
                    return False
                if e.end == vi and p.values[-1] != direct:
                    return False
        return True


def restrict_to_edge(f: TropicalRational, e: Edge) -> EdgeProfile:
    if f.is_neg_inf():
        raise PreconditionError("cannot restrict the constant -inf")
    nl = _edge_lines(f.num, e)
    dl = _edge_lines(f.den, e)
    hi = e.length
    pts = sorted(set([_ZERO] + _envelope_points(nl, _ZERO, hi) + _envelope_points(dl, _ZERO, hi) + ([hi] if hi is not None else [])))
    vals = [_env_value(nl, s) - _env_value(dl, s) for s in pts]
    tail = None
    if hi is None:
        last = pts[-1] + 1
        top_n = max(nl, key=lambda ab: (ab[0] + ab[1] * last, ab[1]))
        top_d = max(dl, key=lambda ab: (ab[0] + ab[1] * last, ab[1]))
        tail = top_n[1] - top_d[1]
    # drop knots where the slope does not change
    knots, values = [pts[0]], [vals[0]]
    for i in range(1, len(pts)):
        if i < len(pts) - 1 or hi is None:
            if i < len(pts) - 1:
                s_prev = (vals[i] - values[-1]) / (pts[i] - knots[-1])
                s_next = (vals[i + 1] - vals[i]) / (pts[i + 1] - pts[i])
            else:
                s_prev = (vals[i] - values[-1]) / (pts[i] - knots[-1])
                s_next = tail
            if s_prev == s_next:
                continue
        knots.append(pts[i])
        values.append(vals[i])
    return EdgeProfile(e, knots, values, tail)


def restrict_to_complex(f: TropicalRational, C: CurveComplex) -> PLFunctionOnComplex:
    if f.nvars != C.nvars:
        raise DimensionError("function and complex dimensions differ")
    return PLFunctionOnComplex(f, C, [restrict_to_edge(f, e) for e in C.edges()])


def sample_complex_points(C: CurveComplex, rng: random.Random, count: int, ray_extent: int = 20):
    """Deterministic random points ``(edge, s, x)`` on the complex, plus every vertex as ``(None, 0, v)``."""
    out = [(None, _ZERO, v) for v in C.vertices]
    edges = C.edges()
    if not edges:
        return out
    for _ in range(count):
        e = edges[rng.randrange(len(edges))]
        den = rng.randint(1, 16)
        top = e.length if e.length is not None else Fraction(ray_extent)
        s = Fraction(rng.randint(0, int(top * den * 4)), den * 4)
        s = min(s, top)
        out.append((e, s, e.point(s)))
    return out


# -- cone bumps ----------------------------------------------------------------------------


def dual_covector(l: Sequence[int]) -> tuple[int, ...]:
    """Integer ``l'`` with ``l . l' = 1`` by iterated extended gcd."""
    l = [int(v) for v in l]
    if math.gcd(*l) != 1:
        raise PreconditionError(f"{tuple(l)} is not primitive")
    coef = [0] * len(l)
    g = 0
    for i, v in enumerate(l):
        if v == 0:
            continue
        if g == 0:
            g, coef[i] = abs(v), (1 if v > 0 else -1)
            continue
        # extended gcd of g and v
        old_r, r, old_s, s, old_t, t = g, v, 1, 0, 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coef = [c * old_s for c in coef]
        coef[i] = old_t
        g = old_r
    assert dot(coef, l) == 1
    return tuple(coef)


def orthogonal_basis(l: Sequence[int]) -> list[tuple[int, ...]]:
    """Integer basis of the orthogonal complement of ``l``."""
    return [tuple(scale_to_integers(v)) for v in nullspace([list(l)], len(l))]


def cone_rows(apex: Sequence[Fraction], l: Sequence[int], U, t: Fraction):
    """Rows ``(w, c)`` meaning ``w . X + c >= 0`` that cut out ``apex + C_t``.

    ``C_t = {v : |u . v| <= t (l . v) for each u in U}``.
    """
    rows = []
    for u in U:
        for sign in (1, -1):
            w = [t * a - sign * b for a, b in zip(l, u)]
            rows.append((w, -dot(w, apex)))
    return rows


def _rows_interval(e: Edge, rows):
    """Parameters of ``e`` satisfying all rows ``w . X + c >= 0``, as ``(lo, hi)`` or ``None``."""
    lo, hi = _ZERO, e.length
    for w, c in rows:
        slope = dot(w, e.direction)
        const = dot(w, e.origin) + c
        if slope == 0:
            if const < 0:
                return None
            continue
        bound = -const / slope
        if slope > 0:
            lo = max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if hi is not None and lo > hi:
        return None
    return lo, hi


def _g_terms(apex, l) -> list[tuple[tuple[int, ...], Fraction]]:
    """Affine forms ``+-(l_i (X_j - a_j) - l_j (X_i - a_i))`` for ``i < j``."""
    n = len(l)
    out = []
    for i, j in itertools.combinations(range(n), 2):
        e = [0] * n
        e[j] += l[i]
        e[i] -= l[j]
        if not any(e):
            continue
        c = -(l[i] * apex[j] - l[j] * apex[i])
        out.append((tuple(e), c))
        out.append((tuple(-x for x in e), -c))
    return out


@dataclass(frozen=True)
class ConeBump:
    f: TropicalRational
    apex: tuple[Fraction, ...]
    direction: tuple[int, ...]
    dual: tuple[int, ...]
    aperture: Fraction
    k: int
    g: TropicalPoly
    h: TropicalPoly


def bump_exponent(l, dual, U, t: Fraction) -> int:
    """Least integer ``k >= 1`` with ``h <= k g`` outside the open cone (apex at the origin).

    Both sides are positively homogeneous, so on each region
    ``{sign u . v >= t l . v, l' . v >= 0}`` and each cell where a given
    ``g``-form is the maximum, ``h / g`` peaks at the LP maximum of ``l' . v``
    subject to that form being 1.
    """
    n = len(l)
    zero = (_ZERO,) * n
    terms = _g_terms(zero, l)
    best = Fraction(0)
    for u in U:
        for sign in (1, -1):
            base_ub = [[t * a - sign * b for a, b in zip(l, u)], [-x for x in dual]]
            base_b = [0, 0]
            for idx, (e, _) in enumerate(terms):
                a_ub = list(base_ub) + [[o - s for o, s in zip(other, e)] for k2, (other, _) in enumerate(terms) if k2 != idx]
                b_ub = base_b + [0] * (len(terms) - 1)
                a_ub.append([-x for x in e])  # form >= 0 (dominates the constant term)
                b_ub.append(0)
                res = linprog(list(dual), a_ub, b_ub, [list(e)], [1])
                if res.status == INFEASIBLE:
                    continue
                if res.status != OPTIMAL:
                    raise InconclusiveError("unbounded bump ratio; cone too wide")
                best = max(best, res.value)
    return max(1, math.ceil(best))


def cone_bump(apex: Sequence, l: Sequence[int], t: Fraction) -> ConeBump:
    """``max(0, h - k g)`` for the cone ``apex + C_t`` around direction ``l``."""
    apex = tuple(to_fraction(v) for v in apex)
    l = tuple(int(v) for v in l)
    n = len(l)
    if n < 2:
        raise PreconditionError("cone bumps need at least two variables")
    dual = dual_covector(l)
    U = orthogonal_basis(l)
    k = bump_exponent(l, dual, U, t)
    g = TropicalPoly(n, [((0,) * n, 0)] + _g_terms(apex, l))
    h = TropicalPoly(n, [((0,) * n, 0), (dual, -dot(dual, apex))])
    gk = poly_pow(g, k)
    f = TropicalRational(poly_add(h, gk), gk)
    return ConeBump(f, apex, l, dual, t, k, g, h)


def _aperture_search(conflict, max_halvings: int = 40) -> Fraction:
    t = Fraction(1)
    for _ in range(max_halvings):
        if not conflict(t):
            return t
        t /= 2
    raise InconclusiveError("no cone aperture separated the feature within the iteration cap")


# -- chart functions -----------------------------------------------------------------------


@dataclass
class ChartFunction:
    f: TropicalRational
    construction: str  # "ray_bump" | "segment_tent" | "vertex_star"
    base_point: tuple[Fraction, ...]
    data: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


def ray_bump(C: CurveComplex, ray_index: int, max_steps: int = 8) -> ChartFunction:
    """``f >= 0`` with slope one on a terminal subray ``e_x`` of the ray and ``f = 0`` elsewhere on ``C``.

    The base point starts one lattice step beyond the ray's vertex and doubles
    its distance when no aperture works; ``f(x) = 0`` at the base point.
    """
    if C.nvars < 2:
        raise PreconditionError("ray bumps need n >= 2; use the one-variable tent or star")
    if not 0 <= ray_index < len(C.rays):
        raise PreconditionError(f"ray index {ray_index} out of range")
    dup = [p for p in check_ray_directions(C) if ray_index in p]
    if dup:
        raise PreconditionError(f"rays {dup[0]} share a primitive direction")
    edges = C.edges()
    ray = edges[len(C.segments) + ray_index]
    l = ray.direction
    U = orthogonal_basis(l)
    others = [e for e in edges if e is not ray]
    lone = _isolated_vertices(C)
    step = Fraction(1)
    for _ in range(max_steps):
        x = ray.point(step)

        def conflict(t, x=x):
            rows = cone_rows(x, l, U, t)
            if any(_rows_interval(e, rows) is not None for e in others):
                return True
            return any(all(dot(w, C.vertices[v]) + c >= 0 for w, c in rows) for v in lone)

        try:
            t = _aperture_search(conflict)
        except InconclusiveError:
            step *= 2
            continue
        b = cone_bump(x, l, t)
        return ChartFunction(
            b.f, "ray_bump", x, {"ray": ray_index, "direction": l, "dual": b.dual, "aperture": t, "k": b.k, "offset": step}
        )
    raise InconclusiveError("ray bump search exhausted its step budget")


def _isolated_vertices(C: CurveComplex) -> list[int]:
    used = set()
    for e in C.edges():
        used |= C.edge_vertices(e)
    return [v for v in range(len(C.vertices)) if v not in used]


def _one_var_tent(z: Fraction, depth: Fraction) -> TropicalRational:
    """``max(-|X - z|, -depth)`` in one variable."""
    a = TropicalRational(TropicalPoly(1, [((1,), -z)]))
    b = TropicalRational(TropicalPoly(1, [((-1,), z)]))
    return rat_add(rat_min(a, b), TropicalRational.constant(-depth, 1))


def segment_tent(C: CurveComplex, segment_index: int) -> ChartFunction:
    """Tent of height ``l/2`` over the segment: ``0`` at the midpoint, ``-l/2`` elsewhere on ``C``."""
    if not 0 <= segment_index < len(C.segments):
        raise PreconditionError(f"segment index {segment_index} out of range")
    e = C.edges()[segment_index]
    L = e.length
    if not L or L <= 0:
        raise PreconditionError("degenerate segment")
    p = e.origin
    q = e.point(L)
    z = e.point(L / 2)
    if C.nvars == 1:
        f = _one_var_tent(z[0], L / 2)
        return ChartFunction(f, "segment_tent", z, {"segment": segment_index, "length": L})
    u = e.direction
    mu = tuple(-v for v in u)
    U = orthogonal_basis(u)
    others = [d for d in C.edges() if d is not e]
    lone = _isolated_vertices(C)

    def conflict(t):
        rows = cone_rows(p, u, U, t) + cone_rows(q, mu, U, t)
        for d in others:
            iv = _rows_interval(d, rows)
            if iv is None:
                continue
            lo, hi = iv
            if hi is None or lo != hi:
                return True
            if d.point(lo) not in (p, q):
                return True
        return any(all(dot(w, C.vertices[v]) + c >= 0 for w, c in rows) for v in lone)

    t = _aperture_search(conflict)
    bx = cone_bump(p, u, t)
    by = cone_bump(q, mu, t)
    half = TropicalRational.constant(-L / 2, C.nvars)
    f = rat_add(rat_mul(half, rat_min(bx.f, by.f)), half)
    return ChartFunction(
        f, "segment_tent", z, {"segment": segment_index, "length": L, "aperture": t, "k": [bx.k, by.k]}
    )


def _min_on_edges(N: TropicalRational, edges: Sequence[Edge]) -> Fraction | None:
    best = None
    for d in edges:
        m = restrict_to_edge(N, d).minimum()
        if m is None:
            raise AssertionError("gauge unbounded below on an edge")
        best = m if best is None else min(best, m)
    return best


def vertex_star(C: CurveComplex, vertex_index: int, eps=None) -> ChartFunction:
    """``f(x) = 0`` at the vertex, slope one toward it on every incident arm of length ``eps``,
    and ``f = -eps`` on the rest of ``C``.

    ``eps`` defaults to the largest admissible value up to half the shortest
    incident segment and at most 1; a user value is checked exactly.
    """
    if not 0 <= vertex_index < len(C.vertices):
        raise PreconditionError(f"vertex index {vertex_index} out of range")
    n = C.nvars
    x = C.vertices[vertex_index]
    arms = C.incident(vertex_index)
    if not arms:
        msg = "isolated vertex: returning the constant 0"
        warnings.warn(msg, stacklevel=2)
        return ChartFunction(TropicalRational.constant(0, n), "vertex_star", x, {"vertex": vertex_index}, [msg])
    arm_edges = [a[0] for a in arms]
    default_eps = min(Fraction(1), min([e.length / 2 for e in arm_edges if e.length is not None], default=Fraction(1)))
    if eps is not None:
        eps = to_fraction(eps)
        if eps <= 0:
            raise PreconditionError("eps must be positive")
        if any(e.length is not None and eps > e.length for e in arm_edges):
            raise PreconditionError("eps exceeds an incident segment")
    lone = [v for v in _isolated_vertices(C) if v != vertex_index]
    far = [e for e in C.edges() if e not in arm_edges]

    if n == 1:
        fx = x[0]
        if len(arms) == 2:
            e = eps if eps is not None else default_eps
            f = _one_var_tent(fx, e)
            return _finish_star(C, vertex_index, f, e, far, lone, {"vertex": vertex_index, "eps": e})
        e = eps if eps is not None else default_eps
        d = arms[0][1][0]
        choices = [
            TropicalRational(TropicalPoly(1, [((-d,), d * fx), ((0,), -e)])),
            TropicalRational(TropicalPoly(1, [((d,), -d * fx), ((0,), -e)])),
        ]
        for f in choices:
            try:
                return _finish_star(C, vertex_index, f, e, far, lone, {"vertex": vertex_index, "eps": e})
            except PreconditionError:
                continue
        raise PreconditionError("neither one-variable leaf formula is constant on the rest of the complex")

    dirs = [a[1] for a in arms]

    # The gauge N below is positive off the vertex whatever the aperture, and
    # eps is cut down to its minimum on far edges; only the arms must stay
    # outside each other's cones so that N grows with slope one along each.
    def conflict(t):
        origin = (_ZERO,) * n
        for l in dirs:
            rows = cone_rows(origin, l, orthogonal_basis(l), t)
            if any(d != l and all(dot(w, d) >= 0 for w, _ in rows) for d in dirs):
                return True
        return False

    t = _aperture_search(conflict)
    bumps = [cone_bump(x, l, t) for l in dirs]
    prod = bumps[0].f
    for b in bumps[1:]:
        prod = rat_mul(prod, b.f)
    # q_i vanishes exactly on the forward ray of arm i
    qs = []
    for b in bumps:
        back = TropicalPoly(n, [(tuple(-v for v in b.dual), dot(b.dual, x))])
        qs.append(TropicalRational(poly_add(b.g, back)))
    qmin = qs[0]
    for qq in qs[1:]:
        qmin = rat_min(qmin, qq)
    N = rat_add(prod, qmin)
    data = {"vertex": vertex_index, "aperture": t, "k": [b.k for b in bumps]}
    if eps is None:
        eps = default_eps
        if far:
            m = _min_on_edges(N, far)
            eps = min(eps, m)
        for v in lone:
            eps = min(eps, rat_eval(N, C.vertices[v]))
        if eps <= 0:
            raise AssertionError("gauge vanishes away from the vertex")
    data["eps"] = eps
    f = rat_add(rat_inv(N), TropicalRational.constant(-eps, n))
    return _finish_star(C, vertex_index, f, eps, far, lone, data)


def _finish_star(C, vi, f, eps, far, lone, data) -> ChartFunction:
    """Check the star shape exactly before returning it."""
    for d in far:
        prof = restrict_to_edge(f, d)
        if any(v != -eps for v in prof.values) or prof.tail_slope not in (None, 0):
            raise PreconditionError(f"eps = {eps} too large: f is not constant on {d.label}")
    for v in lone:
        if rat_eval(f, C.vertices[v]) != -eps:
            raise PreconditionError(f"eps = {eps} too large at vertex {v}")
    for e, _, at_start in C.incident(vi):
        prof = restrict_to_edge(f, e)
        if prof.tail_slope not in (None, 0):
            raise PreconditionError(f"f is not constant far out on {e.label}")
        for s in set(prof.knots) | {eps if at_start else e.length - eps}:
            dist = s if at_start else e.length - s
            if prof.value(s) != -min(dist, eps):
                raise PreconditionError(f"f does not descend with slope one along {e.label}")
    return ChartFunction(f, "vertex_star", C.vertices[vi], data)
