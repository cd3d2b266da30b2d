"""File formats: families, norms, lifted bodies and predicate strings.

Rationals are written as strings ("p/q" or "p") so they survive any JSON reader.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .engine import (
    ContainsIntegerPoint,
    ContainsKColinear,
    DiameterAtLeast,
    Family,
    NonemptyIntersection,
    VWidthAtLeast,
)
from .geometry import HalfSpace, HPolytope, VBody, as_rational
from .norms import PolytopeNorm


class FormatError(ValueError):
    pass


def rat(x) -> str:
    return str(Fraction(x))


def _parse_rat(x) -> Fraction:
    if isinstance(x, bool) or x is None:
        raise FormatError(f"expected a rational, got {x!r}")
    try:
        return as_rational(x)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise FormatError(f"bad rational {x!r}: {e}") from None


def body_to_json(ident: str, body) -> dict:
    if isinstance(body, HPolytope):
        return {
            "id": ident,
            "type": "H",
            "halfspaces": [{"a": [rat(a) for a in c.normal], "b": rat(c.offset)} for c in body.constraints],
        }
    return {"id": ident, "type": "V", "points": [[rat(x) for x in p] for p in body.points]}


def body_from_json(obj: dict, dim: int):
    kind = obj.get("type")
    if kind == "H":
        cons = tuple(HalfSpace(tuple(_parse_rat(a) for a in h["a"]), _parse_rat(h["b"]))
                     for h in obj.get("halfspaces", []))
        return HPolytope(dim, cons)
    if kind == "V":
        return VBody(dim, tuple(tuple(_parse_rat(x) for x in p) for p in obj["points"]))
    raise FormatError(f"unknown body type {kind!r} (expected 'H' or 'V')")


def family_to_json(family: Family, **extra) -> dict:
    out = {"dim": family.dim, "members": [body_to_json(i, b) for i, b in family.members]}
    out.update(extra)
    return out


def family_from_json(obj: dict) -> Family:
    try:
        dim = int(obj["dim"])
        members = tuple((str(m["id"]), body_from_json(m, dim)) for m in obj["members"])
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed family file: missing or bad field {e}") from None
    if not members:
        raise FormatError("family has no members")
    return Family(dim, members)


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e})") from None


def load_family(path) -> Family:
    return family_from_json(read_json(path))


def save_family(path, family: Family, **extra):
    write_json(path, family_to_json(family, **extra))


def norm_to_json(norm: PolytopeNorm) -> dict:
    return {"name": norm.name, "dim": norm.dim, "functionals": [[rat(x) for x in v] for v in norm.functionals]}


def norm_from_json(obj: dict) -> PolytopeNorm:
    fs = tuple(tuple(_parse_rat(x) for x in v) for v in obj["functionals"])
    dim = int(obj.get("dim", len(fs[0])))
    return PolytopeNorm(dim, fs, obj.get("name", "custom"))


def resolve_norm(name: str, dim: int) -> PolytopeNorm | None:
    """'linf', 'l1', 'l2' (returns None: Euclidean) or a path to a norm JSON file."""
    if name in ("linf", "inf", "oo"):
        return PolytopeNorm.linf(dim)
    if name == "l1":
        return PolytopeNorm.l1(dim)
    if name == "l2":
        return None
    norm = norm_from_json(read_json(name))
    if norm.dim != dim:
        raise FormatError(f"norm file {name} lives in R^{norm.dim}, family in R^{dim}")
    return norm


def parse_predicate(text: str, dim: int):
    """Predicate strings.

    nonempty | integer | colinear:K | diameter:NORM:T (>= T) | diameter:NORM:>T (strict)
    | diameter-sq:l2:T | vwidth:V1,V2,...:T (also ``>T`` and ``vwidth-sq``).
    """
    parts = text.split(":")
    head = parts[0]
    try:
        if head == "nonempty" and len(parts) == 1:
            return NonemptyIntersection()
        if head == "integer" and len(parts) == 1:
            return ContainsIntegerPoint()
        if head == "colinear" and len(parts) == 2:
            return ContainsKColinear(int(parts[1]))
        if head in ("diameter", "diameter-sq", "vwidth", "vwidth-sq") and len(parts) == 3:
            t = parts[2]
            strict = t.startswith(">")
            threshold = _parse_rat(t.lstrip(">="))
            squared = head.endswith("-sq")
            if head.startswith("diameter"):
                norm = resolve_norm(parts[1], dim)
                if norm is None and not squared:
                    # Euclidean thresholds are compared on squares
                    return DiameterAtLeast(None, threshold * threshold, strict, squared=True) if threshold >= 0 \
                        else DiameterAtLeast(None, 0, False, squared=True)
                return DiameterAtLeast(norm, threshold, strict, squared)
            v = tuple(_parse_rat(x) for x in parts[1].split(","))
            if len(v) != dim:
                raise FormatError(f"direction {parts[1]} does not live in R^{dim}")
            return VWidthAtLeast(v, threshold, strict, squared)
    except FormatError:
        raise
    except (ValueError, IndexError) as e:
        raise FormatError(f"bad predicate {text!r}: {e}") from None
    raise FormatError(f"unknown predicate {text!r}")
