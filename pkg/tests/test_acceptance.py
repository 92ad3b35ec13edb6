"""Acceptance gate: one test per criterion, at the stated sample sizes and tolerances.

Every check here is exact except the runtime budget.  A pass/fail line per
criterion is printed at the end of the run (see ``conftest.py``).
"""

from __future__ import annotations

import contextlib
import json
import random
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import nnls

from charts import all_charts, check_chart
from conftest import DATA
from gen import rand_normal, rand_piece, rand_poly, rand_rational, rand_union
from oracles import brute_nearest, poly_value
from tropcong.congruence import (
    CongruencePair,
    bound_holds,
    exponent_bound_N,
    halfspace_generator,
    intersection_generator,
    synthesize_generator,
    vanishing_locus,
    variety_of_pair,
)
from tropcong.curves import segment_tent
from tropcong.kernels import PointBatch, poly_values, rat_equal_mask, rat_values
from tropcong.polyhedra import (
    ConeV,
    HalfSpace,
    Polyhedron,
    PolyhedralUnion,
    UnionIndex,
    cone_contains,
    cone_h_to_v,
    decompose_point,
    face_points,
    is_empty,
    polar_cone,
    project_onto_cone,
    random_point,
    sample_points,
    union_dist_sq,
    union_dist_sq_many,
    vertices,
)
from tropcong.tropical import (
    TropicalPoly,
    TropicalRational,
    canonicalize,
    func_eq,
    normalize_pair,
    poly_eval,
    rat_eval,
    rat_pow,
)

criterion = pytest.mark.criterion


def _grid(n, lo=-4, hi=4, step=Fraction(1, 2)):
    ticks = [lo + k * step for k in range(int((hi - lo) / step) + 1)]
    rng = random.Random(n)
    pts = [tuple(rng.choice(ticks) for _ in range(n)) for _ in range(2000)]
    return pts


def _points_on(U: PolyhedralUnion, rng, per_piece):
    pts = []
    for P in U.pieces:
        pts.extend(face_points(P))
        pts.extend(sample_points(P, rng, per_piece))
    return pts


# -- 1 -------------------------------------------------------------------------------


@criterion(1, "generator round trip: f = 0 exactly on V (100 unions in R^2, 50 in R^3, <= 5 min)")
def test_generator_round_trip():
    start = time.perf_counter()
    mismatches = []
    checked = 0
    for n, count in ((2, 100), (3, 50)):
        for i in range(count):
            rng = random.Random(1000 * n + i)
            V = rand_union(rng, n)
            cert = synthesize_generator(V)
            pts = []
            for P in V.pieces:
                pts.extend(vertices(P))
                pts.extend(face_points(P))
            pts.extend(random_point(rng, n) for _ in range(1000))
            zero = rat_equal_mask(cert.f, cert.g, PointBatch(pts))
            for x, z in zip(pts, zero):
                if V.contains(x) != z:
                    mismatches.append((n, i, x))
            checked += len(pts)
    elapsed = time.perf_counter() - start
    print(f"\n  {checked} points, {elapsed:.1f} s")
    assert not mismatches, mismatches[:5]
    assert elapsed <= 300


# -- 2 -------------------------------------------------------------------------------


def _random_pair(rng, n, i):
    kw = dict(lo=-1 if i % 3 == 0 else 0, hi=3, degree=3)
    if i % 2:
        f = TropicalRational(rand_poly(rng, n, 5, **kw))
        g = TropicalRational(rand_poly(rng, n, 5, **kw))
    else:
        f = rand_rational(rng, n, 5, **kw)
        g = rand_rational(rng, n, 5, **kw)
    if i % 7 == 0:  # shared terms make the variety full-dimensional in places
        shared = list(f.num.terms.items())[:2] + list(g.num.terms.items())[:1]
        g = TropicalRational(TropicalPoly(n, shared), g.den)
    return f, g


@criterion(2, "variety_of_pair agrees with pointwise equality (200 pairs, 10^4 points each)")
def test_variety_matches_evaluation():
    bad = []
    for i in range(200):
        n = 1 + i % 3
        rng = random.Random(5000 + i)
        f, g = _random_pair(rng, n, i)
        U = variety_of_pair(CongruencePair(f, g))
        pts = _points_on(U, rng, 40)[:4000]
        pts += _grid(n)
        pts += [random_point(rng, n) for _ in range(10_000 - len(pts))]
        assert len(pts) == 10_000
        batch = PointBatch(pts)
        eq = rat_equal_mask(f, g, batch)
        inside = UnionIndex(U).contains_many(batch)
        for k, (x, a, b) in enumerate(zip(pts, eq, inside)):
            if a != b:
                bad.append((i, x))
            if k < 200:  # pure-Python replay of the batched predicates
                assert (rat_eval(f, x) == rat_eval(g, x)) == a
                assert U.contains(x) == b
    assert not bad, bad[:5]


# -- 3 -------------------------------------------------------------------------------


def _halfspace_family(rng, n):
    x0 = random_point(rng, n, 3, 2)
    hs = []
    for _ in range(rng.randint(2, 4)):
        a = rand_normal(rng, n)
        slack = Fraction(rng.randint(0, 3), rng.randint(1, 2)) if rng.random() < 0.6 else Fraction(0)
        hs.append(HalfSpace(a, -sum(ai * xi for ai, xi in zip(a, x0)) - slack))
    return hs


@criterion(3, "sum and product intersection generators have identical vanishing loci (100 families)")
def test_intersection_modes_agree():
    done = 0
    seed = 0
    while done < 100:
        seed += 1
        rng = random.Random(7000 + seed)
        n = 2 + seed % 2
        hs = _halfspace_family(rng, n)
        P = Polyhedron(n, hs)
        if is_empty(P):
            continue
        done += 1
        fs = [halfspace_generator(h) for h in hs]
        Us = vanishing_locus(intersection_generator(fs, "sum"))
        Up = vanishing_locus(intersection_generator(fs, "product"))
        pts = face_points(P) + sample_points(P, rng, 100)
        pts += _points_on(Us, rng, 20) + _points_on(Up, rng, 20)
        pts += [random_point(rng, n, 5, 4) for _ in range(400)]
        a = UnionIndex(Us).contains_many(pts)
        b = UnionIndex(Up).contains_many(pts)
        assert a == b
        assert a == [P.contains(x) for x in pts]


# -- 4 -------------------------------------------------------------------------------


def _bound_instance(rng, n, i):
    """A nonnegative ``g`` and a nonempty ``V`` on which it vanishes."""
    while True:
        if i % 2 == 0:
            h, _ = normalize_pair(rand_rational(rng, n, 3), rand_rational(rng, n, 3))
            V = vanishing_locus(h)
            g = h if i % 4 == 0 else rat_pow(h, 2)
        else:
            V = rand_union(rng, n, max_pieces=2, empty_rate=0)
            g = synthesize_generator(V).f
            if i % 3 == 0:
                g = rat_pow(g, 2)
        if len(V) and any(not is_empty(P) for P in V.pieces):
            return g, V


@criterion(4, "g(x) <= N dist(x, V) for exponent_bound_N (50 instances, 10^3 points each)")
def test_exponent_bound():
    failures = 0
    for i in range(50):
        rng = random.Random(9000 + i)
        n = 1 + i % 3
        g, V = _bound_instance(rng, n, i)
        N = exponent_bound_N(g)
        near = []
        for P in V.pieces:
            for p in face_points(P)[:20]:
                near.append(tuple(v + Fraction(rng.randint(-6, 6), 4) for v in p))
        pts = (near + [random_point(rng, n) for _ in range(1000)])[:1000]
        vals = rat_values(g, PointBatch(pts))
        d2 = union_dist_sq_many(V, pts)
        for k, (x, v, d) in enumerate(zip(pts, vals, d2)):
            if k < 30:
                assert d == union_dist_sq(x, V)
            if not bound_holds(v, N, d):
                failures += 1
    assert failures == 0


# -- 5 -------------------------------------------------------------------------------


def _rand_cone(rng, n):
    return Polyhedron(n, [HalfSpace(rand_normal(rng, n), 0) for _ in range(rng.randint(1, 5))])


@criterion(5, "cone projection x = y + z, y in K, z in K*, y.z = 0, nearest point (200 in R^3)")
def test_cone_projection():
    for i in range(200):
        rng = random.Random(11000 + i)
        K = _rand_cone(rng, 3)
        x = random_point(rng, 3)
        y, z = project_onto_cone(K, x)
        assert tuple(a + b for a, b in zip(y, z)) == x
        assert K.contains(y)
        normals = ConeV(3, [h.normal for h in K.halfspaces])
        assert cone_contains(normals, z)
        # polar as an H-polyhedron through double description
        assert polar_cone(cone_h_to_v(K)).contains(z)
        assert sum(a * b for a, b in zip(y, z)) == 0
        assert y == brute_nearest([(h.normal, h.offset) for h in K.halfspaces], x)
        # floating cross-check: z is the projection onto the cone of normals
        A = np.array([h.normal for h in K.halfspaces], dtype=float).T
        lam, _ = nnls(A, np.array([float(v) for v in x]))
        assert np.allclose(A @ lam, [float(v) for v in z], atol=1e-9)


# -- 6 -------------------------------------------------------------------------------


@criterion(6, "decompose_point certificates reconstruct x - w exactly (200 instances)")
def test_decomposition_certificates():
    done = 0
    seed = 0
    while done < 200:
        seed += 1
        rng = random.Random(13000 + seed)
        n = 2 + seed % 2
        K = rand_piece(rng, n, max_h=6, empty_rate=0, flat_rate=0.15)
        if is_empty(K):
            continue
        done += 1
        x = random_point(rng, n)
        d = decompose_point(K, x)
        hs = K.halfspaces
        assert K.contains(d.w)
        assert set(d.active) == {i for i, h in enumerate(hs) if h.value(d.w) == 0}
        assert all(c >= 0 for c in d.multipliers.values())
        recon = tuple(
            d.w[k] + sum((c * hs[i].normal[k] for i, c in d.multipliers.items()), Fraction(0)) for k in range(n)
        )
        assert recon == x
        assert d.w == brute_nearest([(h.normal, h.offset) for h in hs], x)


# -- 7 -------------------------------------------------------------------------------


@criterion(7, "chart functions on the 10-complex corpus pass slope/constancy checks (200 points each)")
def test_chart_corpus(complexes):
    assert len(complexes) == 10
    problems = []
    total = 0
    for name, C in complexes.items():
        with pytest.warns(UserWarning) if name == "single_point" else contextlib.nullcontext():
            charts = all_charts(C)
        for k, ch in enumerate(charts):
            total += 1
            problems.extend(f"{name}: {p}" for p in check_chart(C, ch, 200, seed=k))
    assert total >= 40
    assert not problems, problems[:5]
    tent = segment_tent(complexes["interval_1d"], 0).f
    assert [rat_eval(tent, (v,)) for v in (1, 0, 2, 5)] == [0, -1, -1, -1]


# -- 8 -------------------------------------------------------------------------------


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "tropcong", *map(str, args)], capture_output=True, text=True)


@criterion(8, "curve-check flags the parallel-ray complex (exit 1, rays 0 and 1); others pass")
def test_curve_check_obstruction():
    for path in sorted((DATA / "complexes").glob("*.json")):
        res = _cli("curve-check", path)
        report = json.loads(res.stdout)
        if path.stem == "parallel_rays":
            assert res.returncode == 1
            assert report["duplicate_ray_directions"] == [[0, 1]]
        else:
            assert res.returncode == 0, path.stem
            assert report["duplicate_ray_directions"] == []


# -- 9 -------------------------------------------------------------------------------


@criterion(9, "canonicalize preserves values and is idempotent; func_eq matches sampling (500 each)")
def test_canonical_form_and_equality():
    for i in range(500):
        rng = random.Random(15000 + i)
        n = 1 + i % 3
        p = rand_poly(rng, n, 8, lo=-2 if i % 4 == 0 else 0, hi=3, degree=4)
        c = canonicalize(p)
        assert canonicalize(c) == c
        pts = [random_point(rng, n) for _ in range(10_000)]
        batch = PointBatch(pts)
        assert poly_values(p, batch) == poly_values(c, batch)
        for x in pts[:100]:
            assert poly_eval(p, x) == poly_eval(c, x) == poly_value(list(p.terms.items()), x)

    disagreements = []
    for i in range(500):
        rng = random.Random(16000 + i)
        n = 1 + i % 3
        p, q = _eq_pair(rng, n, i)
        pts = [random_point(rng, n) for _ in range(10_000)]
        batch = PointBatch(pts)
        sampled = poly_values(p, batch) == poly_values(q, batch)
        if func_eq(p, q) != sampled:
            disagreements.append(i)
    assert not disagreements


def _eq_pair(rng, n, i):
    """Pairs that are equal by construction or differ on a region of size about 1."""
    p = rand_poly(rng, n, 5, hi=3, degree=3)
    items = list(p.terms.items())
    kind = i % 4
    if kind == 0:  # add terms dominated by a midpoint of two existing ones
        extra = []
        for (e1, c1), (e2, c2) in zip(items, items[1:] + items[:1]):
            mid = tuple(a + b for a, b in zip(e1, e2))
            if all(v % 2 == 0 for v in mid):
                extra.append((tuple(v // 2 for v in mid), (c1 + c2) / 2 - rng.randint(0, 2)))
        q = TropicalPoly(n, items + extra)
    elif kind == 1:
        q = canonicalize(p)
    elif kind == 2:  # raise an essential term's coefficient
        c = canonicalize(p)
        e, v = sorted(c.terms.items())[rng.randrange(len(c.terms))]
        q = TropicalPoly(n, [t for t in items if t[0] != e] + [(e, v + 2)])
    else:  # a new constant term that wins near a random point
        x0 = random_point(rng, n, 3, 1)
        q = TropicalPoly(n, items + [((0,) * n, poly_eval(p, x0) + rng.choice([-1, 2]))])
    return p, q


# -- 10 ------------------------------------------------------------------------------


@criterion(10, "CLI generate + verify on the corpus is byte-reproducible with the same seed")
def test_cli_determinism(tmp_path):
    def run(tag):
        out = []
        for path in sorted((DATA / "unions").glob("*.json")):
            cert = tmp_path / f"{tag}-{path.stem}.cert.json"
            rep = tmp_path / f"{tag}-{path.stem}.report.json"
            assert _cli("generate", path, "--out", cert).returncode == 0
            res = _cli("verify", cert, "--seed", 7, "--samples", 300, "--out", rep)
            assert res.returncode == 0, res.stderr
            out.append(cert.read_bytes() + rep.read_bytes())
        return out

    assert run("a") == run("b")
