"""Point sets, triangle congruence keys and triangle class tables."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import NamedTuple

import numpy as np

from .numbers import Fraction, GaussianRational

__all__ = [
    "PointSet",
    "TriangleKey",
    "ClassTable",
    "sq_dist",
    "triangle_key",
    "class_table",
    "triangle_energy",
    "cauchy_schwarz_check",
    "CauchySchwarz",
    "distinct_distance_count",
    "cross",
    "TRIPLE_CONVENTIONS",
]

TRIPLE_CONVENTIONS = ("all_P3", "distinct_points")


class PointSet:
    """Deduplicated finite planar point set in canonical (re, im) order."""

    __slots__ = ("points", "_index", "__dict__")

    def __init__(self, points: Iterable):
        pts = {GaussianRational.coerce(p) for p in points}
        self.points: tuple[GaussianRational, ...] = tuple(sorted(pts, key=GaussianRational.sort_key))
        self._index = {p: i for i, p in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[GaussianRational]:
        return iter(self.points)

    def __getitem__(self, i: int) -> GaussianRational:
        return self.points[i]

    def __contains__(self, p) -> bool:
        return p in self._index

    def index(self, p: GaussianRational) -> int:
        return self._index[p]

    def get_index(self, p: GaussianRational, default=None):
        return self._index.get(p, default)

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"PointSet(n={len(self)})"

    def translate(self, t) -> "PointSet":
        t = GaussianRational.coerce(t)
        return PointSet(p - t for p in self.points)

    @cached_property
    def frame(self) -> tuple[int, list[int], list[int]]:
        """Common denominator ``D`` and integer coordinates ``D * p``."""
        D = lcm(*(p.d for p in self.points)) if self.points else 1
        xs = [p.x * (D // p.d) for p in self.points]
        ys = [p.y * (D // p.d) for p in self.points]
        return D, xs, ys

    @cached_property
    def frame_bits(self) -> int:
        _, xs, ys = self.frame
        return max((abs(v).bit_length() for v in (*xs, *ys)), default=0)

    @cached_property
    def distance_ids(self) -> tuple[np.ndarray, list[Fraction]]:
        """Intern every squared distance as a small integer id.

        Returns an ``n x n`` id matrix and the list of exact squared
        distances indexed by id, sorted ascending (id 0 is the zero distance).
        """
        D, xs, ys = self.frame
        n = len(self.points)
        if self.frame_bits <= 29:
            X = np.array(xs, dtype=np.int64)
            Y = np.array(ys, dtype=np.int64)
            sq = (X[:, None] - X[None, :]) ** 2 + (Y[:, None] - Y[None, :]) ** 2
            values, inverse = np.unique(sq, return_inverse=True)
            ids = inverse.reshape(n, n).astype(np.int64)
            scale = D * D
            return ids, [Fraction(int(v), scale) for v in values]
        raw = {}
        rows = np.zeros((n, n), dtype=object)
        for i in range(n):
            for j in range(i + 1, n):
                v = (xs[i] - xs[j]) ** 2 + (ys[i] - ys[j]) ** 2
                rows[i, j] = rows[j, i] = v
                raw[v] = None
        rows[np.arange(n), np.arange(n)] = 0
        raw[0] = None
        ordered = sorted(raw)
        lookup = {v: k for k, v in enumerate(ordered)}
        ids = np.vectorize(lookup.__getitem__, otypes=[np.int64])(rows) if n else np.zeros((0, 0), np.int64)
        scale = D * D
        return ids, [Fraction(v, scale) for v in ordered]


def sq_dist(p, q) -> Fraction:
    """Exact squared Euclidean distance."""
    return (GaussianRational.coerce(p) - GaussianRational.coerce(q)).norm()


def cross(u: GaussianRational, v: GaussianRational) -> Fraction:
    """Planar cross product ``u.re * v.im - u.im * v.re``."""
    return Fraction(u.x * v.y - u.y * v.x, u.d * v.d)


class TriangleKey(NamedTuple):
    """Squared side lengths ``(|p-q|^2, |q-r|^2, |p-r|^2)`` of an ordered triple."""

    d_pq: Fraction
    d_qr: Fraction
    d_pr: Fraction


def triangle_key(p, q, r) -> TriangleKey:
    return TriangleKey(sq_dist(p, q), sq_dist(q, r), sq_dist(p, r))


@dataclass(frozen=True)
class ClassTable:
    """Realisation counts ``r(t)`` of every triangle class.

    Stored as parallel arrays: ``codes`` packs three distance ids, ``counts``
    holds the realisation counts.  ``distances`` maps ids to exact values.
    """

    codes: np.ndarray
    counts: np.ndarray
    distances: list[Fraction]
    convention: str = "all_P3"

    def __len__(self) -> int:
        return len(self.codes)

    def _decode(self, code: int) -> TriangleKey:
        m = len(self.distances)
        a, rest = divmod(int(code), m * m)
        b, c = divmod(rest, m)
        return TriangleKey(self.distances[a], self.distances[b], self.distances[c])

    def keys(self) -> Iterator[TriangleKey]:
        return (self._decode(c) for c in self.codes)

    def items(self) -> Iterator[tuple[TriangleKey, int]]:
        return ((self._decode(c), int(k)) for c, k in zip(self.codes, self.counts))

    def as_dict(self) -> dict[TriangleKey, int]:
        return dict(self.items())

    def __getitem__(self, key: TriangleKey) -> int:
        return self.as_dict().get(TriangleKey(*key), 0)

    def total(self) -> int:
        return int(self.counts.sum(dtype=np.int64)) if len(self.counts) else 0

    def energy(self) -> int:
        return sum(int(c) * int(c) for c in self.counts)


def class_table(P: PointSet, convention: str = "all_P3") -> ClassTable:
    """Count ordered triples of ``P`` by :class:`TriangleKey`.

    ``all_P3`` ranges over every triple in ``P^3`` (repeats included);
    ``distinct_points`` keeps only pairwise-distinct triples.
    """
    if convention not in TRIPLE_CONVENTIONS:
        raise ValueError(f"unknown triple convention {convention!r}")
    n = len(P)
    if n < 1:
        raise ValueError("class_table needs a nonempty point set")
    ids, distances = P.distance_ids
    m = len(distances)
    if m**3 >= 2**62:
        raise OverflowError("too many distinct distances to pack triangle keys")
    codes = []
    counts = []
    # one slab per first vertex keeps peak memory at O(n^2)
    ar = np.arange(n)
    for p in range(n):
        slab = (ids[p][:, None] * m + ids) * m + ids[p][None, :]
        if convention == "distinct_points":
            mask = (ar[:, None] != ar[None, :]) & (ar[:, None] != p) & (ar[None, :] != p)
            slab = slab[mask]
        c, k = np.unique(slab, return_counts=True)
        codes.append(c)
        counts.append(k)
    allc = np.concatenate(codes)
    allk = np.concatenate(counts)
    uc, inv = np.unique(allc, return_inverse=True)
    # float weights are exact here: every partial sum is at most |P|^3 < 2^53
    tot = np.bincount(inv, weights=allk, minlength=len(uc)).astype(np.int64)
    return ClassTable(uc, tot, distances, convention)


def triangle_energy(P: PointSet, convention: str = "all_P3", table: ClassTable | None = None) -> int:
    """Number of pairs of congruent ordered triples: ``sum_t r(t)^2``."""
    table = table if table is not None else class_table(P, convention)
    return table.energy()


class CauchySchwarz(NamedTuple):
    lhs: int
    rhs: int
    holds: bool


def cauchy_schwarz_check(P: PointSet, convention: str = "all_P3", table: ClassTable | None = None) -> CauchySchwarz:
    """``(sum_t r(t))^2 <= |T(P)| * sum_t r(t)^2``; for ``all_P3`` the left side is ``|P|^6``."""
    table = table if table is not None else class_table(P, convention)
    lhs = table.total() ** 2
    rhs = len(table) * table.energy()
    return CauchySchwarz(lhs, rhs, lhs <= rhs)


def distinct_distance_count(P: PointSet) -> int:
    """Number of distinct nonzero distances among pairs of points."""
    if len(P) < 2:
        raise ValueError("distinct_distance_count needs at least 2 points")
    _, distances = P.distance_ids
    return len(distances) - 1
