"""Point, generator-spec, config and report files.

Every rational is written as ``"num/den"`` text and read back exactly;
decimal literals such as ``0.25`` are accepted on input and parsed as
rationals, never as floats.
"""

from __future__ import annotations

import csv
import io as _io
import json
from collections.abc import Iterable, Mapping
from pathlib import Path

import jsonschema

from .affine import AffineElement
from .errors import ValidationError
from .geometry import PointSet
from .numbers import Fraction, GaussianRational, format_rational, parse_rational

__all__ = [
    "SCHEMA_VERSION",
    "POINTS_SCHEMA",
    "GENERATOR_SCHEMA",
    "CONFIG_SCHEMA",
    "REPORT_SCHEMA",
    "encode_rational",
    "encode_point",
    "encode_element",
    "encode_value",
    "decode_point",
    "dumps",
    "points_to_json",
    "parse_points_json",
    "parse_points_csv",
    "read_points",
    "write_points",
    "read_json",
    "validate",
]

SCHEMA_VERSION = 1

_RATIONAL = {"type": "string", "pattern": r"^\s*[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?(\s*/\s*\d+)?\s*$"}
_NUMBER_IN = {"oneOf": [_RATIONAL, {"type": "integer"}]}
_POINT_IN = {"type": "array", "items": _NUMBER_IN, "minItems": 2, "maxItems": 2}
_EXACT = {"type": "string", "pattern": r"^-?\d+/\d+$"}
_POINT_OUT = {"type": "array", "items": _EXACT, "minItems": 2, "maxItems": 2}

POINTS_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["points"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "points": {"type": "array", "items": _POINT_IN},
    },
}

_GEN_KINDS = ["lattice", "ap_line", "parallel_ap_lines", "rotation_orbit", "concentric_orbits", "union", "random_integer"]

GENERATOR_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": {
        "spec": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": _GEN_KINDS},
                "m": {"type": "integer", "minimum": 1},
                "n": {"type": "integer", "minimum": 1},
                "N": {"type": "integer", "minimum": 1},
                "L": {"type": "integer", "minimum": 1},
                "t": _NUMBER_IN,
                "base": _POINT_IN,
                "step": _POINT_IN,
                "offset": _POINT_IN,
                "p0": _POINT_IN,
                "center": _POINT_IN,
                "scales": {"type": "array", "items": _NUMBER_IN, "minItems": 1},
                "range": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer"},
                "parts": {"type": "array", "items": {"$ref": "#/$defs/spec"}, "minItems": 1},
            },
        }
    },
    "$ref": "#/$defs/spec",
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "triple_convention": {"enum": ["all_P3", "distinct_points"]},
        "tau_vertical": {"oneOf": [{"const": "auto"}, {"type": "integer", "minimum": 2}]},
        "tau_torus": {"oneOf": [{"const": "auto"}, {"type": "integer", "minimum": 2}]},
        "k_policy": {"enum": ["largest_good", "all_good"]},
        "C3_line": _NUMBER_IN,
        "emit_svg": {"type": "boolean"},
        "M": _NUMBER_IN,
        "C": _NUMBER_IN,
        "max_branches": {"type": "integer", "minimum": 1},
    },
}

_CHECK = {
    "type": "object",
    "required": ["name", "lhs", "rhs", "relation", "holds"],
    "properties": {
        "name": {"type": "string"},
        "lhs": _EXACT,
        "rhs": _EXACT,
        "relation": {"enum": ["<=", ">=", "=="]},
        "holds": {"type": "boolean"},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": [
        "schema_version",
        "n",
        "points",
        "config",
        "triangles",
        "distinct_distances",
        "spectrum",
        "constants",
        "good_ks",
        "chosen_ks",
        "sections",
        "checks",
        "verdict",
        "notes",
    ],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "n": {"type": "integer", "minimum": 3},
        "points": {"type": "array", "items": _POINT_OUT},
        "config": {"type": "object"},
        "triangles": {
            "type": "object",
            "required": ["convention", "classes", "triples", "energy", "M_emp"],
            "properties": {"M_emp": _EXACT, "classes": {"type": "integer"}},
        },
        "distinct_distances": {"type": "integer"},
        "spectrum": {
            "type": "object",
            "required": ["rows", "motions", "C_emp", "rich_square_sum", "se2_triple_energy"],
            "properties": {
                "rows": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
                },
                "C_emp": _EXACT,
            },
        },
        "constants": {"type": "object", "required": ["M", "C", "source"]},
        "good_ks": {"type": "array", "items": {"type": "integer"}},
        "chosen_ks": {"type": "array", "items": {"type": "integer"}},
        "checks": {"type": "array", "items": _CHECK},
        "sections": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k", "S_size", "group_energy", "star_energy", "checks", "detection", "branches"],
                "properties": {"checks": {"type": "array", "items": _CHECK}},
            },
        },
        "verdict": {"type": "object", "required": ["structure", "message"]},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}


def validate(instance, schema: Mapping, what: str) -> None:
    try:
        jsonschema.validate(instance, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"invalid {what} at {where}: {exc.message}") from None


def encode_rational(q) -> str:
    return format_rational(q)


def encode_point(p: GaussianRational) -> list[str]:
    return [format_rational(p.re), format_rational(p.im)]


def encode_element(g: AffineElement) -> dict:
    return {"a": encode_point(g.a), "b": encode_point(g.b)}


def encode_value(v):
    """Recursively turn exact values into JSON-ready data."""
    if isinstance(v, bool) or v is None or isinstance(v, (str, float)):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, GaussianRational):
        return encode_point(v)
    if isinstance(v, AffineElement):
        return encode_element(v)
    if isinstance(v, Mapping):
        return {str(k): encode_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [encode_value(x) for x in v]
    raise TypeError(f"cannot encode {type(v).__name__}")


def _number(v, where: str) -> Fraction:
    if isinstance(v, bool):
        raise ValidationError(f"{where}: expected a rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        try:
            return parse_rational(v)
        except ValueError:
            raise ValidationError(f"{where}: invalid rational {v!r}") from None
    raise ValidationError(f"{where}: expected a rational string, got {v!r}")


def decode_point(v, where: str = "point") -> GaussianRational:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise ValidationError(f"{where}: expected [x, y], got {v!r}")
    return GaussianRational(_number(v[0], f"{where}[0]"), _number(v[1], f"{where}[1]"))


def dumps(data) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def points_to_json(P: Iterable[GaussianRational]) -> dict:
    return {"schema_version": SCHEMA_VERSION, "points": [encode_point(p) for p in P]}


def parse_points_json(text: str) -> PointSet:
    try:
        # bare decimal literals stay text so they parse exactly
        data = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    validate(data, POINTS_SCHEMA, "points file")
    pts = [decode_point(p, f"points[{i}]") for i, p in enumerate(data["points"])]
    P = PointSet(pts)
    if len(P) != len(pts):
        raise ValidationError(f"points file lists {len(pts) - len(P)} duplicate point(s)")
    return P


def parse_points_csv(text: str) -> PointSet:
    """``x,y`` rows; an optional non-numeric header row is skipped."""
    pts = []
    rows = list(csv.reader(_io.StringIO(text)))
    for lineno, row in enumerate(rows, start=1):
        cells = [c.strip() for c in row]
        if not cells or all(not c for c in cells) or cells[0].startswith("#"):
            continue
        if len(cells) != 2:
            raise ValidationError(f"line {lineno}: expected 2 fields x,y, got {len(cells)}")
        try:
            x = parse_rational(cells[0])
        except ValueError:
            if not pts and lineno == 1:
                continue  # header
            raise ValidationError(f"line {lineno}, field 1: invalid rational {cells[0]!r}") from None
        try:
            y = parse_rational(cells[1])
        except ValueError:
            raise ValidationError(f"line {lineno}, field 2: invalid rational {cells[1]!r}") from None
        pts.append(GaussianRational(x, y))
    P = PointSet(pts)
    if len(P) != len(pts):
        raise ValidationError(f"CSV lists {len(pts) - len(P)} duplicate point(s)")
    return P


def read_points(path: str | Path) -> PointSet:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    if path.suffix.lower() == ".csv" or (path.suffix.lower() != ".json" and not text.lstrip().startswith("{")):
        return parse_points_csv(text)
    return parse_points_json(text)


def write_points(P: Iterable[GaussianRational], path: str | Path) -> None:
    Path(path).write_text(dumps(points_to_json(P)), encoding="utf-8")


def read_json(path: str | Path, schema: Mapping | None = None, what: str = "file", exact_decimals: bool = True):
    """Load JSON; with ``exact_decimals`` bare decimal literals are kept as text."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text, parse_float=str if exact_decimals else float)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if schema is not None:
        validate(data, schema, what)
    return data
