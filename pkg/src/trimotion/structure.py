"""Turn rich cosets into planar structure: circles and parallel line families."""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass, field
from math import gcd, lcm

from .affine import AffineElement, act, mul
from .cosets import TorusCoset, coset_rep_in_SE2
from .errors import ValidationError
from .geometry import PointSet, sq_dist
from .numbers import ONE, Fraction, GaussianRational, as_fraction

__all__ = [
    "Circle",
    "LineFamily",
    "CircleExtraction",
    "unique_translation",
    "orbit_circle",
    "extract_circle",
    "parallel_line_cover",
    "primitive_direction",
]


@dataclass(frozen=True)
class Circle:
    center: GaussianRational
    radius_sq: Fraction

    def contains(self, p) -> bool:
        return sq_dist(p, self.center) == self.radius_sq


@dataclass(frozen=True)
class CircleExtraction:
    circle: Circle
    hits: list[GaussianRational]
    start: GaussianRational
    out_degree: int
    edges: int


@dataclass
class LineFamily:
    """Parallel lines of occupancy at least ``top / C3``.

    Each line is ``(anchor, points)`` with ``anchor`` its least point.
    """

    direction: GaussianRational
    lines: list[tuple[GaussianRational, list[GaussianRational]]]
    residual: list[GaussianRational]
    sigma_emp: float
    n: int
    C3: Fraction = field(default=Fraction(1))

    @property
    def top(self) -> int:
        return len(self.lines[0][1]) if self.lines else 0

    @property
    def covered(self) -> int:
        return sum(len(pts) for _, pts in self.lines)

    @property
    def no_structure(self) -> bool:
        return 2 * len(self.residual) >= self.n


def unique_translation(theta: AffineElement, z) -> AffineElement:
    """The one element of ``theta (T(z) ∩ SE2)`` with multiplier 1."""
    z = GaussianRational.coerce(z)
    ainv = ONE / theta.a
    h = AffineElement(ainv, z * (ONE - ainv))
    t = mul(theta, h)
    if t.a != ONE:
        raise AssertionError("translation multiplier is not 1")
    return t


def orbit_circle(theta: AffineElement, z, p) -> Circle:
    """Circle carrying ``{m p : m in theta (T(z) ∩ SE2)}``: center ``theta z``, radius ``|p - z|``."""
    z, p = GaussianRational.coerce(z), GaussianRational.coerce(p)
    t = unique_translation(theta, z)
    return Circle(act(t, z), sq_dist(p, z))


def extract_circle(coset: TorusCoset, S: Iterable[AffineElement], P: PointSet) -> CircleExtraction:
    """Pigeonhole a rich circle out of a torus coset.

    Edges ``p -> m p`` land inside ``P``; the point of largest out-degree
    (least point on ties) has its whole orbit on one circle.
    """
    S = list(S)
    theta = coset_rep_in_SE2(coset, S)
    S_set = set(S)
    members = [m for m in coset.members if m in S_set]
    best, best_deg, edges = None, 0, 0
    for p in P:
        deg = len({q for m in members if (q := act(m, p)) in P})
        edges += deg
        if deg > best_deg:
            best, best_deg = p, deg
    if best is None:
        raise ValidationError("no edges: no coset member maps a point of P into P")
    circle = orbit_circle(theta, coset.z, best)
    hits = [p for p in P if circle.contains(p)]
    return CircleExtraction(circle, hits, best, best_deg, edges)


def primitive_direction(dx: int, dy: int) -> tuple[int, int]:
    g = gcd(dx, dy)
    dx, dy = dx // g, dy // g
    if dx < 0 or (dx == 0 and dy < 0):
        dx, dy = -dx, -dy
    return dx, dy


def parallel_line_cover(P: PointSet, C3=1) -> LineFamily:
    """Best family of parallel lines covering ``P``.

    Only lines with at least two points count.  Directions are compared by
    points covered by lines of occupancy ``>= top / C3``, then by ``top``,
    then by the least primitive integer direction.
    """
    n = len(P)
    if n < 2:
        raise ValidationError("line cover needs at least 2 points")
    C3 = as_fraction(C3)
    if C3 < 1:
        raise ValidationError("C3 must be at least 1")
    _, xs, ys = P.frame
    # direction -> line key -> point indices
    by_dir: dict[tuple[int, int], dict[int, set[int]]] = defaultdict(lambda: defaultdict(set))
    for i in range(n):
        for j in range(i + 1, n):
            d = primitive_direction(xs[j] - xs[i], ys[j] - ys[i])
            key = d[0] * ys[i] - d[1] * xs[i]
            line = by_dir[d][key]
            line.add(i)
            line.add(j)
    best = None
    for d, lines in by_dir.items():
        sizes = sorted((len(s) for s in lines.values()), reverse=True)
        top = sizes[0]
        covered = sum(s for s in sizes if s * C3 >= top)
        rank = (-covered, -top, d)
        if best is None or rank < best[0]:
            best = (rank, d)
    d = best[1]
    top = -best[0][1]
    chosen = []
    used: set[int] = set()
    for idx in by_dir[d].values():
        if len(idx) * C3 >= top:
            pts = sorted(P[i] for i in idx)
            chosen.append((pts[0], pts))
            used |= idx
    chosen.sort(key=lambda line: (-len(line[1]), line[0].sort_key()))
    residual = [P[i] for i in range(n) if i not in used]
    sigma = math.log(top) / math.log(n)
    return LineFamily(GaussianRational(d[0], d[1]), chosen, residual, sigma, n, C3)


# keep lcm importable for callers that build integer frames by hand
_ = lcm
