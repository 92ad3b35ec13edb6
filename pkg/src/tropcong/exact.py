"""Exact rational helpers: parsing, integer scaling and small dense linear algebra."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import ParseError

NEG_INF = float("-inf")


def to_fraction(value) -> Fraction:
    """Convert ``value`` to a Fraction, refusing floats.

    Accepts ints, Fractions and strings such as ``"3"``, ``"-7/2"``.
    """
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ParseError(f"expected 'p/q', got {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"expected 'p/q', got {value!r}") from exc
    raise ParseError(f"not a rational: {value!r}")


def to_extended(value):
    """Like :func:`to_fraction` but also accepts ``"-inf"``."""
    if isinstance(value, str) and value.strip() == "-inf":
        return NEG_INF
    if isinstance(value, float) and value == NEG_INF:
        return NEG_INF
    return to_fraction(value)


def fmt(value) -> str:
    """Serialize an extended rational as ``"p/q"``, ``"p"`` or ``"-inf"``."""
    if value == NEG_INF:
        return "-inf"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_neg_inf(value) -> bool:
    return isinstance(value, float) and value == NEG_INF


def vec(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_fraction(v) for v in values)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out


def gcd_all(values: Iterable[int]) -> int:
    out = 0
    for v in values:
        out = math.gcd(out, v)
    return out


def primitive(v: Sequence) -> tuple[tuple[int, ...], Fraction]:
    """Write a nonzero rational vector as ``scale * p`` with ``p`` primitive.

    Returns ``(p, scale)`` with ``scale > 0``.
    """
    fr = [Fraction(x) for x in v]
    den = lcm_all(x.denominator for x in fr)
    ints = [int(x * den) for x in fr]
    g = gcd_all(abs(x) for x in ints)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // g for x in ints), Fraction(g, den)


def scale_to_integers(row: Sequence) -> list[int]:
    """Positive rescaling of a rational row to coprime integers (zero row stays zero)."""
    fr = [Fraction(x) for x in row]
    den = lcm_all(x.denominator for x in fr)
    ints = [int(x * den) for x in fr]
    g = gcd_all(abs(x) for x in ints)
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def ceil_sqrt(q: Fraction, scale: int = 1 << 20) -> Fraction:
    """A rational upper bound on ``sqrt(q)``; exact when ``q`` is a square."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    a, b = q.numerator, q.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    r = math.isqrt(a * b * scale * scale)
    if r * r != a * b * scale * scale:
        r += 1
    return Fraction(r, b * scale)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve the square nonsingular system ``a x = b``; ``None`` if singular."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    m, piv = rref(aug)
    if piv != list(range(n)):
        return None
    return [m[i][n] for i in range(n)]


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows x = 0}``."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    m, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(piv):
            v[c] = -m[r][f]
        basis.append(v)
    return basis


def independent_subset(rows: Sequence[Sequence]) -> bool:
    return rank(rows) == len(rows)
