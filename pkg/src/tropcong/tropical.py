"""Max-plus scalars, Laurent polynomials and rational functions.

A polynomial is stored as a dict ``exponent tuple -> Fraction``; the empty dict
is the constant ``-inf``.  Rational functions are formal quotients ``num/den``
that are never reduced automatically.  Equality of values is functional and
decided by exact LP dominance.
"""

from __future__ import annotations

import functools
import math
import random
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import DimensionError, PreconditionError
from .exact import NEG_INF, fmt, is_neg_inf, to_extended, to_fraction
from .lp import OPTIMAL, linprog

# -- scalars -----------------------------------------------------------------


def t_add(a, b):
    """Tropical sum (max) of extended rationals."""
    if is_neg_inf(a):
        return b
    if is_neg_inf(b):
        return a
    return max(a, b)


def t_mul(a, b):
    """Tropical product (ordinary sum); ``-inf`` absorbs."""
    if is_neg_inf(a) or is_neg_inf(b):
        return NEG_INF
    return a + b


# -- polynomials -------------------------------------------------------------


class AffineForm(NamedTuple):
    coeff: Fraction
    exponents: tuple[int, ...]

    def __call__(self, x: Sequence) -> Fraction:
        return self.coeff + sum(e * v for e, v in zip(self.exponents, x) if e)


class TropicalPoly:
    """A max of affine forms ``c + e.x`` with integer exponent vectors ``e``."""

    __slots__ = ("nvars", "terms", "_key")

    def __init__(self, nvars: int, terms: Mapping | Iterable = ()):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        self.nvars = nvars
        merged: dict[tuple[int, ...], Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, coeff in items:
            coeff = to_extended(coeff)
            if is_neg_inf(coeff):
                continue
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise DimensionError(f"exponent {exps} has length {len(exps)}, expected {nvars}")
            old = merged.get(exps)
            if old is None or coeff > old:
                merged[exps] = coeff
        self.terms = merged
        self._key = None

    @classmethod
    def constant(cls, c, nvars: int) -> "TropicalPoly":
        return cls(nvars, [((0,) * nvars, c)])

    @classmethod
    def monomial(cls, coeff, exponents: Sequence[int]) -> "TropicalPoly":
        return cls(len(exponents), [(tuple(exponents), coeff)])

    @classmethod
    def variable(cls, i: int, nvars: int) -> "TropicalPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, [(tuple(e), 0)])

    @classmethod
    def neg_inf(cls, nvars: int) -> "TropicalPoly":
        return cls(nvars)

    def forms(self) -> list[AffineForm]:
        return [AffineForm(c, e) for e, c in sorted(self.terms.items())]

    def is_neg_inf(self) -> bool:
        return not self.terms

    def is_constant_zero(self) -> bool:
        return len(self.terms) == 1 and self.terms.get((0,) * self.nvars) == 0

    def key(self):
        if self._key is None:
            self._key = (self.nvars, tuple(sorted(self.terms.items())))
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, TropicalPoly) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __len__(self) -> int:
        return len(self.terms)

    def __call__(self, x: Sequence):
        return poly_eval(self, x)

    def __add__(self, other: "TropicalPoly") -> "TropicalPoly":
        return poly_add(self, other)

    def __mul__(self, other: "TropicalPoly") -> "TropicalPoly":
        return poly_mul(self, other)

    def __repr__(self) -> str:
        return f"TropicalPoly({format_poly(self)})"


def format_poly(p: TropicalPoly) -> str:
    """Human-readable ``max(...)`` rendering using ``x1, x2, ...``."""
    if p.is_neg_inf():
        return "-inf"
    parts = []
    for exps, c in sorted(p.terms.items()):
        mono = []
        for i, e in enumerate(exps):
            if e == 1:
                mono.append(f"x{i + 1}")
            elif e == -1:
                mono.append(f"-x{i + 1}")
            elif e:
                mono.append(f"{e}*x{i + 1}")
        lin = " + ".join(mono).replace("+ -", "- ")
        if not mono:
            parts.append(fmt(c))
        elif c == 0:
            parts.append(lin)
        else:
            parts.append(f"{fmt(c)} + {lin}")
    return parts[0] if len(parts) == 1 else "max(" + ", ".join(parts) + ")"


def _check_dims(*polys: TropicalPoly) -> int:
    n = polys[0].nvars
    for p in polys[1:]:
        if p.nvars != n:
            raise DimensionError(f"dimension mismatch: {n} vs {p.nvars}")
    return n


def _check_point(n: int, x: Sequence) -> tuple[Fraction, ...]:
    if len(x) != n:
        raise DimensionError(f"point has length {len(x)}, expected {n}")
    return tuple(to_fraction(v) for v in x)


def poly_eval(p: TropicalPoly, x: Sequence):
    x = _check_point(p.nvars, x)
    if not p.terms:
        return NEG_INF
    return max(c + sum(e * v for e, v in zip(exps, x) if e) for exps, c in p.terms.items())


def poly_add(p: TropicalPoly, q: TropicalPoly) -> TropicalPoly:
    n = _check_dims(p, q)
    return TropicalPoly(n, list(p.terms.items()) + list(q.terms.items()))


def poly_mul(p: TropicalPoly, q: TropicalPoly) -> TropicalPoly:
    n = _check_dims(p, q)
    if p.is_constant_zero():
        return q
    if q.is_constant_zero():
        return p
    return TropicalPoly(
        n,
        (
            (tuple(a + b for a, b in zip(ep, eq)), cp + cq)
            for ep, cp in p.terms.items()
            for eq, cq in q.terms.items()
        ),
    )


def poly_pow(p: TropicalPoly, k: int) -> TropicalPoly:
    """``p`` to the tropical power ``k >= 0``, as a function.

    ``k * max_t(a_t) = max_t(k * a_t)``, so the power of a polynomial function is
    obtained by scaling every term; no expansion is needed.
    """
    if k < 0:
        raise ValueError("polynomial powers must be nonnegative")
    if k == 0:
        return TropicalPoly.constant(0, p.nvars)
    return TropicalPoly(p.nvars, ((tuple(k * e for e in exps), k * c) for exps, c in p.terms.items()))


def poly_scale(p: TropicalPoly, c) -> TropicalPoly:
    """Tropical product with the scalar ``c``."""
    c = to_fraction(c)
    return TropicalPoly(p.nvars, ((e, v + c) for e, v in p.terms.items()))


# -- LP predicates ------------------------------------------------------------


def _beats_all(t: tuple[tuple[int, ...], Fraction], others: Iterable[tuple[tuple[int, ...], Fraction]], n: int):
    """A point where form ``t`` strictly exceeds every form in ``others``, or ``None``.

    Maximizes ``eps <= 1`` subject to ``t(x) - s(x) >= eps``.
    """
    et, ct = t
    a_ub, b_ub = [], []
    for es, cs in others:
        a_ub.append([s - u for s, u in zip(es, et)] + [1])
        b_ub.append(ct - cs)
    if not a_ub:
        return (Fraction(0),) * n
    a_ub.append([0] * n + [1])
    b_ub.append(1)
    res = linprog([0] * n + [1], a_ub, b_ub)
    if res.status != OPTIMAL or res.value <= 0:
        return None
    return res.x[:n]


@functools.lru_cache(maxsize=None)
def _probe_points(n: int) -> tuple[tuple[int, ...], ...]:
    rng = random.Random(n)
    pts = [(0,) * n]
    for scale in (1, 3, 10, 30, 100, 1000):
        pts.extend(tuple(rng.randint(-scale, scale) for _ in range(n)) for _ in range(16))
    return tuple(pts)


def _strict_winners(items, n: int) -> list[int | None]:
    """Index of the strict maximum among ``items`` at each probe point, or ``None`` on ties.

    A strict maximum at one point is a strict maximum nearby, so every index
    returned belongs to an essential term.  Values are compared as integers
    after clearing coefficient denominators.
    """
    d = math.lcm(*(c.denominator for _, c in items))
    scaled = [(e, int(c * d)) for e, c in items]
    out = []
    for x in _probe_points(n):
        best, arg, tie = None, None, False
        for k, (e, c) in enumerate(scaled):
            v = c + d * sum(a * b for a, b in zip(e, x))
            if best is None or v > best:
                best, arg, tie = v, k, False
            elif v == best:
                tie = True
        out.append(None if tie else arg)
    return out


def canonicalize(p: TropicalPoly) -> TropicalPoly:
    """Keep exactly the terms that are the strict maximum on some open set."""
    items = sorted(p.terms.items())
    if len(items) <= 1:
        return TropicalPoly(p.nvars, items)
    seen = set(_strict_winners(items, p.nvars))
    keep = []
    for i, t in enumerate(items):
        others = items[:i] + items[i + 1:]
        if i in seen or _beats_all(t, others, p.nvars) is not None:
            keep.append(t)
    return TropicalPoly(p.nvars, keep)


def canonical_add(p: TropicalPoly, q: TropicalPoly) -> TropicalPoly:
    return canonicalize(poly_add(p, q))


def canonical_mul(p: TropicalPoly, q: TropicalPoly) -> TropicalPoly:
    """Canonical form of ``p * q`` for canonical ``p`` and ``q``.

    A product term ``s + t`` survives exactly when the open regions where ``s``
    wins in ``p`` and ``t`` wins in ``q`` meet, so each test needs only
    ``len(p) + len(q)`` constraints instead of ``len(p) * len(q)``.
    """
    n = _check_dims(p, q)
    if p.is_constant_zero():
        return q
    if q.is_constant_zero():
        return p
    pitems = sorted(p.terms.items())
    qitems = sorted(q.terms.items())
    seen = set(zip(_strict_winners(pitems, n), _strict_winners(qitems, n)))
    keep = []
    for i, (ep, cp) in enumerate(pitems):
        for j, (eq, cq) in enumerate(qitems):
            if (i, j) in seen:
                keep.append((tuple(a + b for a, b in zip(ep, eq)), cp + cq))
                continue
            a_ub, b_ub = [], []
            for es, cs in pitems[:i] + pitems[i + 1:]:
                a_ub.append([s - u for s, u in zip(es, ep)] + [1])
                b_ub.append(cp - cs)
            for es, cs in qitems[:j] + qitems[j + 1:]:
                a_ub.append([s - u for s, u in zip(es, eq)] + [1])
                b_ub.append(cq - cs)
            a_ub.append([0] * n + [1])
            b_ub.append(1)
            res = linprog([0] * n + [1], a_ub, b_ub)
            if res.status == OPTIMAL and res.value > 0:
                keep.append((tuple(a + b for a, b in zip(ep, eq)), cp + cq))
    return TropicalPoly(n, keep)


def poly_leq(p: TropicalPoly, q: TropicalPoly) -> tuple[bool, tuple[Fraction, ...] | None]:
    """Decide ``p <= q`` everywhere; on failure also return a point with ``p > q``."""
    n = _check_dims(p, q)
    if not p.terms:
        return True, None
    if not q.terms:
        return False, (Fraction(0),) * n
    qitems = list(q.terms.items())
    for t in sorted(p.terms.items()):
        x = _beats_all(t, qitems, n)
        if x is not None:
            return False, x
    return True, None


def func_eq_witness(p: TropicalPoly, q: TropicalPoly) -> tuple[bool, tuple[Fraction, ...] | None]:
    """Functional equality plus a point where the two differ, if any."""
    ok, w = poly_leq(p, q)
    if not ok:
        return False, w
    ok, w = poly_leq(q, p)
    return ok, w


def func_eq(p: TropicalPoly, q: TropicalPoly) -> bool:
    return func_eq_witness(p, q)[0]


# -- rational functions -------------------------------------------------------


class TropicalRational:
    """Formal quotient ``num / den`` of tropical polynomials (a difference of functions)."""

    __slots__ = ("num", "den")

    def __init__(self, num: TropicalPoly, den: TropicalPoly | None = None):
        if den is None:
            den = TropicalPoly.constant(0, num.nvars)
        _check_dims(num, den)
        if den.is_neg_inf():
            raise PreconditionError("denominator is the constant -inf")
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def constant(cls, c, nvars: int) -> "TropicalRational":
        return cls(TropicalPoly(nvars, [((0,) * nvars, c)]))

    @classmethod
    def neg_inf(cls, nvars: int) -> "TropicalRational":
        return cls(TropicalPoly(nvars))

    def is_neg_inf(self) -> bool:
        return self.num.is_neg_inf()

    def __eq__(self, other) -> bool:
        return isinstance(other, TropicalRational) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __call__(self, x: Sequence):
        return rat_eval(self, x)

    def __repr__(self) -> str:
        if self.den.is_constant_zero():
            return f"TropicalRational({format_poly(self.num)})"
        return f"TropicalRational({format_poly(self.num)} / {format_poly(self.den)})"


def as_rational(f) -> TropicalRational:
    return f if isinstance(f, TropicalRational) else TropicalRational(f)


def rat_eval(f: TropicalRational, x: Sequence):
    a = poly_eval(f.num, x)
    if is_neg_inf(a):
        return NEG_INF
    return a - poly_eval(f.den, x)


def rat_add(f: TropicalRational, g: TropicalRational) -> TropicalRational:
    if f.is_neg_inf():
        _check_dims(f.num, g.num)
        return g
    if g.is_neg_inf():
        _check_dims(f.num, g.num)
        return f
    if f.den == g.den:
        return TropicalRational(poly_add(f.num, g.num), f.den)
    return TropicalRational(
        poly_add(poly_mul(f.num, g.den), poly_mul(g.num, f.den)), poly_mul(f.den, g.den)
    )


def rat_mul(f: TropicalRational, g: TropicalRational) -> TropicalRational:
    return TropicalRational(poly_mul(f.num, g.num), poly_mul(f.den, g.den))


def rat_inv(f: TropicalRational) -> TropicalRational:
    if f.is_neg_inf():
        raise PreconditionError("the constant -inf has no tropical inverse")
    return TropicalRational(f.den, f.num)


def rat_pow(f: TropicalRational, k: int) -> TropicalRational:
    if k < 0:
        f, k = rat_inv(f), -k
    if k == 0:
        return TropicalRational.constant(0, f.nvars)
    return TropicalRational(poly_pow(f.num, k), poly_pow(f.den, k))


def rat_scale(f: TropicalRational, c) -> TropicalRational:
    return TropicalRational(poly_scale(f.num, c), f.den)


def rat_min(f: TropicalRational, g: TropicalRational, canonical: bool = False) -> TropicalRational:
    """Pointwise minimum, ``(f^-1 + g^-1)^-1`` in tropical notation.

    Written as ``f_num g_num / (f_num g_den + g_num f_den)``.  With
    ``canonical=True`` (inputs must have canonical numerators and denominators)
    the result is kept in canonical form as it is built.
    """
    if f.is_neg_inf() or g.is_neg_inf():
        raise PreconditionError("minimum with the constant -inf has no tropical inverse form")
    if canonical:
        mul, add = canonical_mul, canonical_add
    else:
        mul, add = poly_mul, poly_add
    return TropicalRational(mul(f.num, g.num), add(mul(f.num, g.den), mul(g.num, f.den)))


def rat_canonicalize(f: TropicalRational) -> TropicalRational:
    return TropicalRational(canonicalize(f.num), canonicalize(f.den))


def rat_leq(f: TropicalRational, g: TropicalRational) -> tuple[bool, tuple[Fraction, ...] | None]:
    """Decide ``f <= g`` everywhere by cross-multiplying."""
    return poly_leq(poly_mul(f.num, g.den), poly_mul(g.num, f.den))


def rat_func_eq_witness(f: TropicalRational, g: TropicalRational):
    return func_eq_witness(poly_mul(f.num, g.den), poly_mul(g.num, f.den))


def rat_func_eq(f: TropicalRational, g: TropicalRational) -> bool:
    return rat_func_eq_witness(f, g)[0]


def normalize_pair(f: TropicalRational, g: TropicalRational) -> tuple[TropicalRational, TropicalRational]:
    """Replace ``(f, g)`` by ``(f/g + 0, g/f + 0)``, both nonnegative.

    With ``A = num_f * den_g`` and ``B = num_g * den_f`` these are
    ``(A + B)/B`` and ``(A + B)/A``.
    """
    if f.is_neg_inf() or g.is_neg_inf():
        raise PreconditionError("normalize_pair needs finite functions")
    a = poly_mul(f.num, g.den)
    b = poly_mul(g.num, f.den)
    top = poly_add(a, b)
    return TropicalRational(top, b), TropicalRational(top, a)


def combine_generators(pairs: Sequence[tuple[TropicalRational, TropicalRational]]) -> TropicalRational:
    """One nonnegative ``f`` with ``<(f, 0)>`` equal to the congruence generated by ``pairs``."""
    if not pairs:
        raise PreconditionError("need at least one pair")
    out = None
    for f, g in pairs:
        for h in normalize_pair(f, g):
            out = h if out is None else rat_add(out, h)
    return out
