"""JSON encoding of polynomials, polyhedra, certificates and complexes.

Rationals travel as decimal-free strings (``"3"``, ``"-7/2"``, ``"-inf"``);
JSON floats are rejected.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .congruence import CongruencePair, GeneratorCertificate, VerifyReport
from .curves import ChartFunction, CurveComplex, GeometricReport
from .errors import ParseError
from .exact import fmt, to_extended, to_fraction
from .polyhedra import ConeV, HalfSpace, Polyhedron, PolyhedralUnion
from .tropical import TropicalPoly, TropicalRational


def _int(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"expected an integer, got {v!r}")
    return v


def _ints(vs) -> list[int]:
    if not isinstance(vs, list):
        raise ParseError(f"expected a list of integers, got {vs!r}")
    return [_int(v) for v in vs]


def _obj(d, *keys) -> dict:
    if not isinstance(d, dict):
        raise ParseError(f"expected an object, got {type(d).__name__}")
    for k in keys:
        if k not in d:
            raise ParseError(f"missing key {k!r}")
    return d


def _jsonable(v):
    if isinstance(v, Fraction):
        return fmt(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


# -- tropical ------------------------------------------------------------------------------


def poly_to_json(p: TropicalPoly) -> dict:
    return {
        "nvars": p.nvars,
        "terms": [{"coeff": fmt(c), "exp": list(e)} for e, c in sorted(p.terms.items())],
    }


def poly_from_json(d) -> TropicalPoly:
    d = _obj(d, "nvars", "terms")
    n = _int(d["nvars"])
    if not isinstance(d["terms"], list):
        raise ParseError("terms must be a list")
    terms = []
    for t in d["terms"]:
        t = _obj(t, "coeff", "exp")
        terms.append((_ints(t["exp"]), to_extended(t["coeff"])))
    return TropicalPoly(n, terms)


def rational_to_json(f: TropicalRational) -> dict:
    return {"num": poly_to_json(f.num), "den": poly_to_json(f.den)}


def rational_from_json(d) -> TropicalRational:
    """Accepts ``{"num", "den"}`` or a bare polynomial (denominator 0)."""
    d = _obj(d)
    if "terms" in d:
        return TropicalRational(poly_from_json(d))
    d = _obj(d, "num", "den")
    return TropicalRational(poly_from_json(d["num"]), poly_from_json(d["den"]))


def pair_from_json(d) -> CongruencePair:
    if isinstance(d, list) and len(d) == 2:
        return CongruencePair(rational_from_json(d[0]), rational_from_json(d[1]))
    d = _obj(d, "lhs", "rhs")
    return CongruencePair(rational_from_json(d["lhs"]), rational_from_json(d["rhs"]))


def pair_to_json(p: CongruencePair) -> dict:
    return {"lhs": rational_to_json(p.lhs), "rhs": rational_to_json(p.rhs)}


def point_from_text(text: str) -> tuple[Fraction, ...]:
    """``"1/2,3"`` or a JSON list such as ``["1/2", 3]``."""
    text = text.strip()
    if text.startswith("["):
        try:
            vals = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from exc
    else:
        vals = [v for v in text.split(",") if v.strip()] if text else []
    return tuple(to_fraction(v) for v in vals)


# -- polyhedra -------------------------------------------------------------------------------


def halfspace_to_json(h: HalfSpace) -> dict:
    return {"normal": list(h.normal), "offset": fmt(h.offset)}


def halfspace_from_json(d) -> HalfSpace:
    d = _obj(d, "normal", "offset")
    return HalfSpace(_ints(d["normal"]), to_fraction(d["offset"]))


def polyhedron_to_json(P: Polyhedron) -> dict:
    return {"nvars": P.nvars, "halfspaces": [halfspace_to_json(h) for h in P.halfspaces]}


def polyhedron_from_json(d, nvars: int | None = None) -> Polyhedron:
    d = _obj(d, "halfspaces")
    hs = [halfspace_from_json(h) for h in d["halfspaces"]]
    n = d.get("nvars", nvars)
    if n is None:
        if not hs:
            raise ParseError("polyhedron without half-spaces needs 'nvars'")
        n = hs[0].nvars
    return Polyhedron(_int(n), hs)


def union_to_json(U: PolyhedralUnion) -> dict:
    return {"nvars": U.nvars, "pieces": [polyhedron_to_json(P) for P in U.pieces]}


def union_from_json(d) -> PolyhedralUnion:
    d = _obj(d, "pieces")
    n = d.get("nvars")
    if n is None:
        for p in d["pieces"]:
            if isinstance(p, dict) and ("nvars" in p or p.get("halfspaces")):
                n = p.get("nvars") or len(p["halfspaces"][0]["normal"])
                break
    if n is None:
        raise ParseError("union needs 'nvars' when no piece fixes the dimension")
    n = _int(n)
    return PolyhedralUnion(n, [polyhedron_from_json(p, n) for p in d["pieces"]])


def cone_to_json(c: ConeV) -> dict:
    return {"nvars": c.nvars, "generators": [list(g) for g in c.generators]}


def cone_from_json(d) -> ConeV:
    d = _obj(d, "generators")
    gens = [_ints(g) for g in d["generators"]]
    n = d.get("nvars", len(gens[0]) if gens else None)
    if n is None:
        raise ParseError("cone without generators needs 'nvars'")
    return ConeV(_int(n), gens)


# -- congruence ------------------------------------------------------------------------------


def certificate_to_json(c: GeneratorCertificate) -> dict:
    return {
        "f": rational_to_json(c.f),
        "variety": union_to_json(c.variety),
        "k_prime": c.k_prime,
        "log": list(c.log),
        "improper": c.improper,
    }


def certificate_from_json(d) -> GeneratorCertificate:
    d = _obj(d, "f", "variety", "k_prime")
    k = d["k_prime"]
    if k != "unverified":
        k = _int(k)
    log = d.get("log", [])
    if not isinstance(log, list) or not all(isinstance(s, str) for s in log):
        raise ParseError("log must be a list of strings")
    improper = d.get("improper", False)
    if not isinstance(improper, bool):
        raise ParseError("improper must be a boolean")
    return GeneratorCertificate(rational_from_json(d["f"]), union_from_json(d["variety"]), k, list(log), improper)


def report_to_json(r: VerifyReport) -> dict:
    out: dict[str, Any] = {
        "ok": r.ok,
        "checked": dict(sorted(r.checked.items())),
        "failures": [
            {"check": f.check, "point": [fmt(v) for v in f.point], "detail": f.detail} for f in r.failures
        ],
        "notes": list(r.notes),
    }
    if r.max_ratio is not None:
        out["max_dist_over_f"] = f"{r.max_ratio:.12g} (approximate)"
    return out


# -- curves --------------------------------------------------------------------------------


def complex_to_json(C: CurveComplex) -> dict:
    return {
        "nvars": C.nvars,
        "vertices": [[fmt(v) for v in p] for p in C.vertices],
        "segments": [list(s) for s in C.segments],
        "rays": [{"base": b, "dir": list(d)} for b, d in C.rays],
    }


def complex_from_json(d) -> CurveComplex:
    d = _obj(d, "nvars", "vertices")
    verts = []
    for v in d["vertices"]:
        if not isinstance(v, list):
            raise ParseError("vertex must be a list")
        verts.append(tuple(to_fraction(x) for x in v))
    segs = []
    for s in d.get("segments", []):
        s = _ints(s)
        if len(s) != 2:
            raise ParseError("segment must list two vertex indices")
        segs.append(tuple(s))
    rays = []
    for r in d.get("rays", []):
        r = _obj(r, "base", "dir")
        rays.append((_int(r["base"]), tuple(_ints(r["dir"]))))
    return CurveComplex(_int(d["nvars"]), verts, segs, rays)


def geometric_report_to_json(r: GeometricReport) -> dict:
    return {
        "ok": r.ok,
        "connected": r.connected,
        "components": r.components,
        "dimension": r.dimension,
        "duplicate_ray_directions": [list(p) for p in r.ray_pairs],
        "not_checked": list(r.not_checked),
    }


def chart_to_json(c: ChartFunction) -> dict:
    side = {"base_point": [fmt(v) for v in c.base_point], "construction": c.construction}
    side.update({k: _jsonable(v) for k, v in sorted(c.data.items())})
    if c.warnings:
        side["warnings"] = list(c.warnings)
    return {"function": rational_to_json(c.f), "sidecar": side}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def loads(text: str):
    try:
        return json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


def _reject_float(s: str):
    raise ParseError(f"floating-point literal {s} not allowed; use 'p/q' strings")
