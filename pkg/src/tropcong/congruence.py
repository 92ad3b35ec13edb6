"""Congruence varieties of function pairs and single generators for polyhedral unions.

The vanishing locus of a pair ``(f, g)`` is computed piece by piece over pairs
of dominant terms.  In the other direction a closed polyhedral union ``V`` gets
one nonnegative rational function ``f`` whose zero set is exactly ``V``: each
half-space contributes ``max(0, a.x + b)``, pieces combine by ``max`` and the
union by pointwise ``min``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, PreconditionError
from .exact import is_neg_inf
from .kernels import PointBatch, rat_values
from .lp import INFEASIBLE, fm_project, linprog
from .polyhedra import (
    ConeV,
    DistanceField,
    HalfSpace,
    Polyhedron,
    PolyhedralUnion,
    UnionIndex,
    distance_constant,
    face_points,
    find_point,
    irredundant,
    is_empty,
    random_point,
    sample_points,
)
from .tropical import (
    TropicalPoly,
    TropicalRational,
    canonicalize,
    poly_leq,
    poly_mul,
    rat_add,
    rat_canonicalize,
    rat_min,
    rat_mul,
)

_ZERO = Fraction(0)


@dataclass(frozen=True)
class CongruencePair:
    lhs: TropicalRational
    rhs: TropicalRational

    def __post_init__(self):
        if self.lhs.nvars != self.rhs.nvars:
            raise DimensionError("pair sides live in different dimensions")

    @property
    def nvars(self) -> int:
        return self.lhs.nvars


# -- varieties ------------------------------------------------------------------------


def _dominance_rows(items, idx):
    """Rows ``(normal, offset)`` meaning ``normal.x + offset <= 0`` for term ``idx`` winning."""
    et, ct = items[idx]
    rows = []
    for k, (es, cs) in enumerate(items):
        if k != idx:
            rows.append(([s - t for s, t in zip(es, et)], cs - ct))
    return rows


def _polyhedron_from_rows(n: int, rows) -> Polyhedron | None:
    """Build a polyhedron; constant rows are decided here (``None`` when violated)."""
    hs = []
    seen = set()
    for a, b in rows:
        if not any(a):
            if b > 0:
                return None
            continue
        h = HalfSpace(a, b)
        if h not in seen:
            seen.add(h)
            hs.append(h)
    return Polyhedron(n, hs)


def variety_of_pair(pair: CongruencePair | tuple) -> PolyhedralUnion:
    """Points where ``lhs`` and ``rhs`` agree, as a union of polyhedra.

    After cross-multiplying to polynomials ``F = f_num g_den`` and
    ``G = g_num f_den``, each pair of terms ``(s, t)`` contributes the set where
    ``s`` wins in ``F``, ``t`` wins in ``G`` and ``s = t``.  Pieces are
    returned without redundant half-spaces.
    """
    if not isinstance(pair, CongruencePair):
        pair = CongruencePair(*pair)
    f, g = pair.lhs, pair.rhs
    n = pair.nvars
    F = poly_mul(f.num, g.den)
    G = poly_mul(g.num, f.den)
    if F.is_neg_inf() and G.is_neg_inf():
        return PolyhedralUnion(n, [Polyhedron(n)])
    if F.is_neg_inf() or G.is_neg_inf():
        return PolyhedralUnion(n)
    F, G = canonicalize(F), canonicalize(G)
    fi = sorted(F.terms.items())
    gi = sorted(G.terms.items())
    f_rows = [_dominance_rows(fi, i) for i in range(len(fi))]
    g_rows = [_dominance_rows(gi, j) for j in range(len(gi))]
    pieces = []
    for i, (es, cs) in enumerate(fi):
        for j, (et, ct) in enumerate(gi):
            diff = [a - b for a, b in zip(es, et)]
            rows = f_rows[i] + g_rows[j] + [(diff, cs - ct), ([-v for v in diff], ct - cs)]
            P = _polyhedron_from_rows(n, rows)
            if P is not None and not is_empty(P):
                pieces.append(irredundant(P))
    return PolyhedralUnion(n, pieces)


# -- generators -----------------------------------------------------------------------


def halfspace_generator(H: HalfSpace) -> TropicalRational:
    """``offset * X^normal + 0``: zero exactly on ``H`` and at least the distance to it."""
    if not any(H.normal):
        raise PreconditionError("half-space normal must be nonzero")
    n = len(H.normal)
    return TropicalRational(TropicalPoly(n, [(H.normal, H.offset), ((0,) * n, 0)]))


def vanishing_locus(f: TropicalRational) -> PolyhedralUnion:
    return variety_of_pair((f, TropicalRational.constant(0, f.nvars)))


def intersect_unions(unions: Sequence[PolyhedralUnion]) -> PolyhedralUnion:
    """Pairwise intersections of pieces, empty ones dropped."""
    n = unions[0].nvars
    pieces = [Polyhedron(n)]
    for U in unions:
        nxt = []
        for P in pieces:
            for Q in U.pieces:
                R = P.intersect(Q)
                if not is_empty(R):
                    nxt.append(R)
        pieces = nxt
    return PolyhedralUnion(n, pieces)


def intersection_generator(
    fs: Sequence[TropicalRational], mode: str = "sum", loci: Sequence[PolyhedralUnion] | None = None
) -> TropicalRational:
    """Combine nonnegative generators so the zero set is the intersection of theirs.

    ``mode="sum"`` takes the pointwise max, ``mode="product"`` the ordinary sum;
    both vanish on the same set.  Raises :class:`PreconditionError` when some
    input has an empty zero set or the zero sets do not meet.  Precomputed
    ``loci`` skip the vanishing-locus computation.
    """
    if mode not in ("sum", "product"):
        raise ValueError(f"unknown mode {mode!r}")
    if not fs:
        raise PreconditionError("need at least one generator")
    if len(fs) == 1:
        return fs[0]
    if loci is None:
        loci = [vanishing_locus(f) for f in fs]
    if any(len(U) == 0 for U in loci):
        raise PreconditionError("an input generator vanishes nowhere")
    if len(intersect_unions(loci)) == 0:
        raise PreconditionError("the zero sets have empty intersection")
    op = rat_add if mode == "sum" else rat_mul
    out = fs[0]
    for f in fs[1:]:
        out = op(out, f)
    return out


def union_generator(f: TropicalRational, g: TropicalRational) -> TropicalRational:
    """Pointwise minimum of two nonnegative generators; zero set is the union."""
    if f.is_neg_inf() or g.is_neg_inf():
        raise PreconditionError("union_generator needs finite functions")
    return rat_min(f, g)


def _piece_poly(P: Polyhedron) -> TropicalPoly:
    n = P.nvars
    return TropicalPoly(n, [((0,) * n, 0)] + [(h.normal, h.offset) for h in P.halfspaces])


def _face_active_sets(P: Polyhedron, limit: int = 4096) -> list[tuple[int, ...]] | None:
    """Index sets ``A`` whose face ``{a_i.x + b_i = 0, i in A}`` meets ``P``.

    Supersets of an empty face are skipped.  Returns ``None`` past ``limit`` LPs.
    """
    a, b = P.ub_rows()
    n = P.nvars
    m = len(a)
    dead: list[frozenset] = []
    out = []
    budget = limit
    for size in range(1, m + 1):
        for A in itertools.combinations(range(m), size):
            fa = frozenset(A)
            if any(d <= fa for d in dead):
                continue
            budget -= 1
            if budget < 0:
                return None
            res = linprog([0] * n, a, b, [a[i] for i in A], [b[i] for i in A])
            if res.status == INFEASIBLE:
                dead.append(fa)
            else:
                out.append(A)
    return out


def piece_distance_exponent(P: Polyhedron, cache: dict | None = None) -> int | None:
    """Integer ``k`` with ``dist(x, P) <= k * max(0, a_i.x + b_i)``; ``None`` if too costly.

    For ``w`` the nearest point, ``x - w`` lies in the cone of the normals active
    at ``w`` and ``a_i.(x - w) = a_i.x + b_i`` for those normals, so a distance
    constant for every active-normal cone suffices.
    """
    if len(P.halfspaces) == 1:
        return 1
    faces = _face_active_sets(P)
    if faces is None:
        return None
    cache = {} if cache is None else cache
    best = Fraction(1)
    for A in faces:
        key = tuple(sorted({P.halfspaces[i].normal for i in A}))
        if key not in cache:
            cache[key] = distance_constant(ConeV(P.nvars, key))
        best = max(best, cache[key])
    return math.ceil(best)


@dataclass
class GeneratorCertificate:
    """A generator ``f`` for the congruence of ``variety`` with the data used to check it.

    ``k_prime`` is an integer with ``dist(x, variety) <= k_prime * f(x)`` or the
    string ``"unverified"``.  For an empty variety the congruence is improper;
    then ``improper`` is set and the generating pair is ``(f, g) = (0, -inf)``.
    """

    f: TropicalRational
    variety: PolyhedralUnion
    k_prime: int | str
    log: list[str] = field(default_factory=list)
    improper: bool = False

    @property
    def g(self) -> TropicalRational:
        if self.improper:
            return TropicalRational.neg_inf(self.variety.nvars)
        return TropicalRational.constant(0, self.variety.nvars)

    @property
    def exponent_bound(self) -> int | None:
        return self.k_prime if isinstance(self.k_prime, int) else None


def synthesize_generator(V: PolyhedralUnion) -> GeneratorCertificate:
    """Build ``f >= 0`` with zero set exactly ``V`` and a distance exponent ``k'``."""
    n = V.nvars
    for P in V.pieces:
        if P.nvars != n:
            raise DimensionError("pieces live in different dimensions")
    log = []
    pieces = []
    for i, P in enumerate(V.pieces):
        if is_empty(P):
            log.append(f"empty: piece {i} dropped")
        else:
            pieces.append(P)
    if not pieces:
        log.append("empty: improper congruence, pair (0, -inf)")
        return GeneratorCertificate(TropicalRational.constant(0, n), V, 0, log, improper=True)
    if any(not P.halfspaces for P in pieces):
        log.append("whole-space: f = 0")
        return GeneratorCertificate(TropicalRational.constant(0, n), V, 1, log)
    cache: dict = {}
    f = None
    k_prime: int | str = 1
    for i, P in enumerate(pieces):
        for h in P.halfspaces:
            log.append(f"halfspace: {list(h.normal)} . x + {h.offset} <= 0")
        if len(P.halfspaces) > 1:
            log.append(f"intersection: {len(P.halfspaces)} half-spaces, sum mode")
        fp = TropicalRational(canonicalize(_piece_poly(P)))
        k = piece_distance_exponent(P, cache)
        if k is None or k_prime == "unverified":
            k_prime = "unverified"
        else:
            k_prime = max(k_prime, k)
        if f is None:
            f = fp
        else:
            f = rat_min(f, fp, canonical=True)
            log.append(f"union: {i + 1} pieces")
    return GeneratorCertificate(f, V, k_prime, log)


# -- exponent bound -------------------------------------------------------------------


def exponent_bound_N(g: TropicalRational) -> int:
    """``N = n * (1 + max |j1_l - j2_l|)`` over numerator/denominator exponent pairs.

    Every linear piece of ``g`` has gradient ``j1 - j2``, so ``g`` is Lipschitz
    with constant at most ``N``; if ``g`` vanishes on ``V`` then
    ``g(x) <= N * dist(x, V)``.
    """
    if g.is_neg_inf():
        raise PreconditionError("exponent bound of the constant -inf")
    gap = 0
    for j1 in g.num.terms:
        for j2 in g.den.terms:
            for a, b in zip(j1, j2):
                gap = max(gap, abs(a - b))
    return g.nvars * (1 + gap)


def bound_holds(value: Fraction, N: int, dist_sq: Fraction) -> bool:
    """Exact ``value <= N * sqrt(dist_sq)``."""
    return value <= 0 or value * value <= N * N * dist_sq


# -- verification -----------------------------------------------------------------------


@dataclass
class Failure:
    check: str
    point: tuple[Fraction, ...]
    detail: str


@dataclass
class VerifyReport:
    checked: dict[str, int] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    max_ratio: float | None = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, check: str, x, detail: str) -> None:
        self.failures.append(Failure(check, tuple(x), detail))


def _values(f: TropicalRational, points):
    if not points:
        return []
    return rat_values(f, PointBatch(points))


def verify_generator(cert: GeneratorCertificate, samples: int = 1000, seed: int = 0, box: int = 10) -> VerifyReport:
    """Exact checks of a certificate on deterministic samples.

    * ``f = 0`` on face points and random points of every piece;
    * ``f > 0`` on random points outside the variety;
    * ``f >= 0`` everywhere sampled;
    * ``dist(x, V) <= k' f(x)`` off the variety, compared through squares.
    """
    rng = random.Random(seed)
    rep = VerifyReport()
    V = cert.variety
    n = V.nvars
    f = cert.f
    live = [P for P in V.pieces if not is_empty(P)]
    if cert.improper:
        rep.checked["improper"] = 1
        if live:
            rep.fail("improper", find_point(live[0]), "variety is nonempty but certificate is improper")
        return rep
    if not live:
        rep.fail("improper", (_ZERO,) * n, "variety is empty but certificate is not flagged improper")
        return rep
    on_v = []
    per_piece = max(1, min(samples, 200))
    for P in live:
        on_v.extend(face_points(P))
        on_v.extend(sample_points(P, rng, per_piece, box))
    for x, v in zip(on_v, _values(f, on_v)):
        if v != 0:
            rep.fail("vanish", x, f"f(x) = {v} on the variety")
    rep.checked["vanish"] = len(on_v)

    ambient = [random_point(rng, n, box) for _ in range(samples)]
    inside = UnionIndex(V).contains_many(ambient) if ambient else []
    vals = _values(f, ambient)
    off, off_vals = [], []
    for x, isin, v in zip(ambient, inside, vals):
        if is_neg_inf(v) or v < 0:
            rep.fail("nonnegative", x, f"f(x) = {v}")
        if isin:
            if v != 0:
                rep.fail("vanish", x, f"f(x) = {v} on the variety")
        else:
            off.append(x)
            off_vals.append(v)
            if is_neg_inf(v) or v <= 0:
                rep.fail("positive", x, f"f(x) = {v} off the variety")
    rep.checked["nonnegative"] = len(ambient)
    rep.checked["positive"] = len(off)

    if off:
        d2 = _union_dist_sq_many(live, off)
        ratio = 0.0
        for x, v, d in zip(off, off_vals, d2):
            if not is_neg_inf(v) and v > 0:
                ratio = max(ratio, math.sqrt(d) / float(v))
        rep.max_ratio = ratio
        if isinstance(cert.k_prime, int):
            k = cert.k_prime
            for x, v, d in zip(off, off_vals, d2):
                if is_neg_inf(v) or (k * v) ** 2 < d or v < 0:
                    rep.fail("distance", x, f"dist^2 = {d} exceeds (k' f)^2 with k' = {k}")
            rep.checked["distance"] = len(off)
        else:
            rep.notes.append(f"k' unverified; sampled max dist/f ~ {ratio:.12g} (approximate)")
    return rep


def _union_dist_sq_many(pieces, points):
    best = None
    for P in pieces:
        d = DistanceField(P).dist_sq_many(points)
        best = d if best is None else [min(a, b) for a, b in zip(best, d)]
    return best


# -- polynomial pair ----------------------------------------------------------------------


def polynomial_pair(f: TropicalRational) -> tuple[TropicalPoly, TropicalPoly]:
    """Polynomials ``(f1, f2)`` with ``f = f1 - f2`` and ``f1 >= f2`` everywhere.

    Negative exponents are cleared by multiplying both sides by one monomial.
    """
    if f.is_neg_inf():
        raise PreconditionError("f must be nonnegative")
    ok, w = poly_leq(f.den, f.num)
    if not ok:
        raise PreconditionError(f"f is negative at {tuple(str(v) for v in w)}")
    n = f.nvars
    shift = [0] * n
    for e in itertools.chain(f.num.terms, f.den.terms):
        for k in range(n):
            shift[k] = max(shift[k], -e[k])
    mono = TropicalPoly(n, [(tuple(shift), 0)])
    f1, f2 = poly_mul(f.num, mono), poly_mul(f.den, mono)
    assert poly_leq(f2, f1)[0]
    return f1, f2


# -- images ---------------------------------------------------------------------------------


def _affine_image(cell: Polyhedron, lin: list[tuple[tuple[int, ...], Fraction]], n: int) -> Polyhedron | None:
    """Image of ``cell`` under ``x -> (e_i . x + c_i)_i`` via Fourier-Motzkin on the graph."""
    m = cell.nvars
    rows = []
    for h in cell.halfspaces:
        rows.append((tuple(Fraction(v) for v in h.normal) + (_ZERO,) * n, -h.offset))
    for i, (e, c) in enumerate(lin):
        y = [_ZERO] * n
        y[i] = Fraction(1)
        a = tuple(Fraction(-v) for v in e) + tuple(y)
        rows.append((a, c))
        rows.append((tuple(-v for v in a), -c))
    proj = fm_project(rows, list(range(m, m + n)), m + n)
    hs = []
    for a, b in proj:
        if not any(a):
            if b < 0:
                return None
            continue
        hs.append(HalfSpace(a, -b))
    return irredundant(Polyhedron(n, hs))


def image_of_polyhedron(maps: Sequence[TropicalRational], P: Polyhedron) -> PolyhedralUnion:
    """Image of ``P`` under ``x -> (f_1(x), ..., f_n(x))`` as a union of polyhedra.

    ``P`` is cut into cells on which every ``f_i`` is one affine form (a choice
    of winning numerator and denominator term per map); each nonempty cell is
    mapped affinely.
    """
    m = P.nvars
    for f in maps:
        if f.nvars != m:
            raise DimensionError("map and polyhedron dimensions differ")
        if f.is_neg_inf():
            raise PreconditionError("maps must be finite")
    n = len(maps)
    choices = []
    for f in maps:
        f = rat_canonicalize(f)
        ni = sorted(f.num.terms.items())
        di = sorted(f.den.terms.items())
        opts = []
        for a in range(len(ni)):
            for b in range(len(di)):
                rows = _dominance_rows(ni, a) + _dominance_rows(di, b)
                e = tuple(x - y for x, y in zip(ni[a][0], di[b][0]))
                opts.append((rows, (e, ni[a][1] - di[b][1])))
        choices.append(opts)
    pieces: list[Polyhedron] = []

    def walk(i: int, cell: Polyhedron, lin: list):
        if i == n:
            img = _affine_image(cell, lin, n)
            if img is not None and img not in pieces and not is_empty(img):
                pieces.append(img)
            return
        for rows, form in choices[i]:
            extra = _polyhedron_from_rows(m, rows)
            if extra is None:
                continue
            nxt = cell.intersect(extra)
            if not is_empty(nxt):
                walk(i + 1, nxt, lin + [form])

    if not is_empty(P):
        walk(0, P, [])
    return PolyhedralUnion(n, pieces)
