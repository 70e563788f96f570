"""Exact constructions of the extremal examples, plus a random control.

Regular polygons have irrational vertices, so circles are populated by
orbits of a rational rotation instead: ``u = ((1 - t^2) + 2 t i) / (1 + t^2)``
has ``|u| = 1`` for every rational ``t``.  The spacing along the circle
is not uniform, but the set is closed under a common rotation the same
way a polygon is.

``random_integer`` uses :class:`random.Random` (Mersenne Twister) seeded
with the given integer; the same seed always gives the same set.
"""

from __future__ import annotations

import random
from collections.abc import Mapping, Sequence

from .errors import ValidationError
from .geometry import PointSet
from .numbers import ONE, ZERO, GaussianRational, as_fraction

__all__ = [
    "GENERATOR_KINDS",
    "lattice",
    "ap_line",
    "parallel_ap_lines",
    "rational_rotation",
    "rotation_orbit",
    "concentric_orbits",
    "union",
    "random_integer",
    "from_spec",
]

GENERATOR_KINDS = (
    "lattice",
    "ap_line",
    "parallel_ap_lines",
    "rotation_orbit",
    "concentric_orbits",
    "union",
    "random_integer",
)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValidationError(msg)


def _point(v) -> GaussianRational:
    return GaussianRational.coerce(v)


def lattice(m: int) -> PointSet:
    """``{(i, j) : 0 <= i, j < m}``."""
    _require(isinstance(m, int) and m >= 1, f"lattice side must be a positive integer, got {m!r}")
    return PointSet((i, j) for i in range(m) for j in range(m))


def ap_line(n: int, base=ZERO, step=ONE) -> PointSet:
    """``{base + j step : 0 <= j < n}``."""
    _require(isinstance(n, int) and n >= 1, f"progression length must be a positive integer, got {n!r}")
    base, step = _point(base), _point(step)
    if not step:
        raise ValidationError("zero step")
    return PointSet(base + step * j for j in range(n))


def parallel_ap_lines(L: int, n: int, offset=(0, 1), step=ONE, base=ZERO) -> PointSet:
    """``L`` translates (by multiples of ``offset``) of one ``n``-term progression."""
    _require(isinstance(L, int) and L >= 1, f"line count must be a positive integer, got {L!r}")
    offset, step = _point(offset), _point(step)
    if not step:
        raise ValidationError("zero step")
    if L > 1:
        _require(bool(offset), "zero offset")
        _require((offset / step).im != 0, "offset is parallel to the step; lines would coincide")
    row = ap_line(n, base, step)
    return PointSet(p + offset * j for j in range(L) for p in row)


def rational_rotation(t) -> GaussianRational:
    """Unit multiplier ``((1 - t^2) + 2 t i) / (1 + t^2)``."""
    t = as_fraction(t)
    return GaussianRational(1 - t * t, 2 * t) / (1 + t * t)


def _order_of(u: GaussianRational) -> int | None:
    # the only rational points of finite order on the unit circle are 1, i, -1, -i
    for k in (1, 2, 4):
        if u**k == ONE:
            return k
    return None


def rotation_orbit(t, p0=ONE, center=ZERO, N: int = 8) -> PointSet:
    """``{center + u^j (p0 - center) : 0 <= j < N}`` for ``u = rational_rotation(t)``."""
    _require(isinstance(N, int) and N >= 1, f"orbit size must be a positive integer, got {N!r}")
    p0, center = _point(p0), _point(center)
    u = rational_rotation(t)
    order = _order_of(u)
    if order is not None and N > order:
        raise ValidationError(f"degenerate rotation: u = {u} has order {order} < N = {N}")
    if N > 1 and p0 == center:
        raise ValidationError("orbit of the center is a single point")
    v = p0 - center
    pts = []
    for _ in range(N):
        pts.append(center + v)
        v = v * u
    return PointSet(pts)


def concentric_orbits(t, p0=ONE, center=ZERO, N: int = 8, scales: Sequence = (1, 2)) -> PointSet:
    """Union of rotation orbits started at ``center + s (p0 - center)`` for each scale ``s``."""
    scales = [as_fraction(s) for s in scales]
    _require(len(scales) >= 1, "at least one scale is required")
    _require(all(s != 0 for s in scales), "scales must be nonzero")
    _require(len({abs(s) for s in scales}) == len(scales), "scales must give distinct radii")
    p0, center = _point(p0), _point(center)
    pts = []
    for s in scales:
        pts.extend(rotation_orbit(t, center + (p0 - center) * s, center, N))
    return PointSet(pts)


def union(A: PointSet, B: PointSet) -> PointSet:
    return PointSet([*A, *B])


def random_integer(n: int, bound: int, seed: int) -> PointSet:
    """``n`` distinct points drawn uniformly from ``[0, bound)^2``."""
    _require(isinstance(n, int) and n >= 1, f"point count must be a positive integer, got {n!r}")
    _require(isinstance(bound, int) and bound >= 1, f"coordinate bound must be a positive integer, got {bound!r}")
    _require(n <= bound * bound, f"cannot draw {n} distinct points from a {bound}x{bound} grid")
    rng = random.Random(seed)
    seen: dict[tuple[int, int], None] = {}
    while len(seen) < n:
        seen[(rng.randrange(bound), rng.randrange(bound))] = None
    return PointSet(seen)


def _get(spec: Mapping, name: str, default=None, required: bool = False):
    if name not in spec:
        if required:
            raise ValidationError(f"generator spec of kind {spec.get('kind')!r} is missing field {name!r}")
        return default
    return spec[name]


def _point_field(spec, name, default):
    v = _get(spec, name, default)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return GaussianRational(as_fraction(v[0]), as_fraction(v[1]))
    return _point(v)


def from_spec(spec: Mapping) -> PointSet:
    """Build a point set from a generator spec mapping (see ``io.GENERATOR_SCHEMA``)."""
    kind = spec.get("kind")
    try:
        if kind == "lattice":
            return lattice(_get(spec, "m", required=True))
        if kind == "ap_line":
            return ap_line(_get(spec, "n", required=True), _point_field(spec, "base", ZERO), _point_field(spec, "step", ONE))
        if kind == "parallel_ap_lines":
            return parallel_ap_lines(
                _get(spec, "L", required=True),
                _get(spec, "n", required=True),
                _point_field(spec, "offset", (0, 1)),
                _point_field(spec, "step", ONE),
                _point_field(spec, "base", ZERO),
            )
        if kind == "rotation_orbit":
            return rotation_orbit(
                as_fraction(_get(spec, "t", required=True)),
                _point_field(spec, "p0", ONE),
                _point_field(spec, "center", ZERO),
                _get(spec, "N", required=True),
            )
        if kind == "concentric_orbits":
            return concentric_orbits(
                as_fraction(_get(spec, "t", required=True)),
                _point_field(spec, "p0", ONE),
                _point_field(spec, "center", ZERO),
                _get(spec, "N", required=True),
                _get(spec, "scales", required=True),
            )
        if kind == "union":
            parts = _get(spec, "parts", required=True)
            _require(isinstance(parts, list) and len(parts) >= 1, "union needs a nonempty 'parts' list")
            out = from_spec(parts[0])
            for part in parts[1:]:
                out = union(out, from_spec(part))
            return out
        if kind == "random_integer":
            return random_integer(
                _get(spec, "n", required=True), _get(spec, "range", required=True), _get(spec, "seed", required=True)
            )
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"invalid {kind} parameters: {exc}") from exc
    raise ValidationError(f"unknown generator kind {kind!r}; expected one of {', '.join(GENERATOR_KINDS)}")

