"""Batch evaluation of max-plus forms and point location over rational points.

Rational inputs are scaled to integers so that every decision is an exact
integer comparison.  The compiled backend (:mod:`tropcong._ckernels`) is used
when it imports and when a magnitude bound proves int64 cannot overflow;
otherwise the pure-Python twin runs on arbitrary-precision ints.

Set ``TROPCONG_KERNEL=python`` to force the fallback.
"""

from __future__ import annotations

import contextlib
import math
import os
from fractions import Fraction
from typing import Sequence

from . import _pykernels
from .exact import NEG_INF, lcm_all

try:  # pragma: no cover - depends on build
    import numpy as np

    from . import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None
    np = None

_LIMIT = 1 << 62
BACKEND = "cython" if _ckernels is not None and os.environ.get("TROPCONG_KERNEL") != "python" else "python"


@contextlib.contextmanager
def use_backend(name: str):
    """Temporarily select ``"cython"`` or ``"python"``."""
    global BACKEND
    if name == "cython" and _ckernels is None:
        raise RuntimeError("compiled kernels are not available")
    old, BACKEND = BACKEND, name
    try:
        yield
    finally:
        BACKEND = old


def compiled_available() -> bool:
    return _ckernels is not None


class PointBatch:
    """Rational points stored as integer numerators over per-point denominators."""

    def __init__(self, points: Sequence[Sequence]):
        self.points = [tuple(x if type(x) is Fraction else Fraction(x) for x in p) for p in points]
        self.nvars = len(self.points[0]) if self.points else 0
        self.V: list[list[int]] = []
        self.D: list[int] = []
        for p in self.points:
            d = math.lcm(*(x.denominator for x in p)) if p else 1
            self.D.append(d)
            self.V.append([x.numerator * (d // x.denominator) for x in p])
        self.vmax = [max((abs(v[k]) for v in self.V), default=0) for k in range(self.nvars)]
        self.dmax = max(self.D, default=1)
        self._np = None

    def __len__(self) -> int:
        return len(self.points)

    def arrays(self):
        if self._np is None:
            V = np.array(self.V, dtype=np.int64).reshape(len(self.V), self.nvars)
            self._np = (np.ascontiguousarray(V), np.array(self.D, dtype=np.int64))
        return self._np


def _compiled_ok(bound: int) -> bool:
    return BACKEND == "cython" and bound < _LIMIT


def scaled_max(terms: Sequence[tuple[Sequence[int], Fraction]], batch: PointBatch, q: int) -> list[int] | None:
    """For each point ``x = v/d``: ``q*d*max_t(c_t + e_t . x)`` as an exact int.

    ``q`` must be a common denominator of every coefficient.  Returns ``None``
    for an empty term list (the constant ``-inf``).
    """
    if not terms:
        return None
    E = [list(e) for e, _ in terms]
    C = [int(c * q) for _, c in terms]
    n = batch.nvars
    bound = max(abs(c) for c in C) * batch.dmax + q * sum(
        max(abs(e[k]) for e in E) * batch.vmax[k] for k in range(n)
    )
    if _compiled_ok(bound) and len(batch):
        V, D = batch.arrays()
        Ea = np.array(E, dtype=np.int64).reshape(len(E), n)
        out = _ckernels.maxplus_eval(np.ascontiguousarray(Ea), np.array(C, dtype=np.int64), V, D, q)
        return out.tolist()
    return _pykernels.maxplus_eval(E, C, batch.V, batch.D, q)


class CellSet:
    """Finite list of cells, each an intersection of rows ``a . x + b >= 0``."""

    def __init__(self, cells: Sequence[Sequence[tuple[Sequence, Fraction]]], nvars: int):
        self.nvars = nvars
        W: list[list[int]] = []
        w: list[int] = []
        offsets = [0]
        for cell in cells:
            for a, b in cell:
                a = [Fraction(x) for x in a]
                b = Fraction(b)
                den = lcm_all([x.denominator for x in a] + [b.denominator])
                W.append([int(x * den) for x in a])
                w.append(int(b * den))
            offsets.append(len(W))
        self.W, self.w, self.offsets = W, w, offsets
        self.wmax = [max((abs(r[k]) for r in W), default=0) for k in range(nvars)]
        self.bmax = max((abs(x) for x in w), default=0)
        self._np = None

    def __len__(self) -> int:
        return len(self.offsets) - 1

    def locate(self, batch: PointBatch) -> list[int]:
        """First containing cell per point, ``-1`` when none contains it."""
        if len(self) == 0:
            return [-1] * len(batch)
        bound = self.bmax * batch.dmax + sum(self.wmax[k] * batch.vmax[k] for k in range(self.nvars))
        if _compiled_ok(bound) and len(batch):
            if self._np is None:
                Wa = np.array(self.W, dtype=np.int64).reshape(len(self.W), self.nvars)
                self._np = (
                    np.ascontiguousarray(Wa),
                    np.array(self.w, dtype=np.int64),
                    np.array(self.offsets, dtype=np.int64),
                )
            V, D = batch.arrays()
            return _ckernels.locate_cells(*self._np, V, D).tolist()
        return _pykernels.locate_cells(self.W, self.w, self.offsets, batch.V, batch.D)


def common_denominator(*polys) -> int:
    return lcm_all(c.denominator for p in polys for c in p.terms.values())


def poly_values(poly, batch: PointBatch) -> list:
    """Exact values (Fraction or ``-inf``) of a tropical polynomial at each point."""
    q = common_denominator(poly)
    s = scaled_max(list(poly.terms.items()), batch, q)
    if s is None:
        return [NEG_INF] * len(batch)
    return [Fraction(v, q * d) for v, d in zip(s, batch.D)]


def rat_values(f, batch: PointBatch) -> list:
    q = common_denominator(f.num, f.den)
    sn = scaled_max(list(f.num.terms.items()), batch, q)
    if sn is None:
        return [NEG_INF] * len(batch)
    sd = scaled_max(list(f.den.terms.items()), batch, q)
    return [Fraction(a - b, q * d) for a, b, d in zip(sn, sd, batch.D)]


def rat_signs(f, batch: PointBatch) -> list[int]:
    """Sign of ``f(x)`` per point; ``-inf`` counts as negative."""
    q = common_denominator(f.num, f.den)
    sn = scaled_max(list(f.num.terms.items()), batch, q)
    if sn is None:
        return [-1] * len(batch)
    sd = scaled_max(list(f.den.terms.items()), batch, q)
    return [(a > b) - (a < b) for a, b in zip(sn, sd)]


def rat_equal_mask(f, g, batch: PointBatch) -> list[bool]:
    """``f(x) == g(x)`` per point, including the case where both are ``-inf``."""
    q = common_denominator(f.num, f.den, g.num, g.den)
    fn = scaled_max(list(f.num.terms.items()), batch, q)
    gn = scaled_max(list(g.num.terms.items()), batch, q)
    if fn is None or gn is None:
        return [fn is None and gn is None] * len(batch)
    fd = scaled_max(list(f.den.terms.items()), batch, q)
    gd = scaled_max(list(g.den.terms.items()), batch, q)
    return [a + d == b + c for a, b, c, d in zip(fn, fd, gn, gd)]
