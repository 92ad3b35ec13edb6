"""Exact tropical rational functions, polyhedral unions and congruence generators."""

from .errors import DimensionError, ParseError, PreconditionError
from .exact import NEG_INF
from .tropical import (
    AffineForm,
    TropicalPoly,
    TropicalRational,
    canonicalize,
    combine_generators,
    func_eq,
    normalize_pair,
    poly_add,
    poly_eval,
    poly_mul,
    poly_pow,
    rat_add,
    rat_eval,
    rat_func_eq,
    rat_inv,
    rat_min,
    rat_mul,
    rat_pow,
)

__version__ = "0.1.0"
