"""Rich rigid motions of a point set and the richness spectrum.

Every rigid motion that maps at least two points of ``P`` into ``P`` is
witnessed by a pair of congruent segments.  :func:`enumerate_motions`
groups segments by squared length and turns each (segment, segment) pair
into a motion; a motion of richness ``m`` is produced by exactly
``m (m - 1)`` ordered segment pairs, so richness falls out of counting.

Segment pairs are bucketed by a fingerprint of the motion modulo a prime
(numpy-vectorised), and every bucket is then certified exactly.  Buckets
that fail the certificate are split with exact arithmetic, so the result
never depends on the fingerprint being collision-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, isqrt
from typing import Iterator

import numpy as np

from .affine import AffineElement, act
from .errors import ConsistencyError
from .geometry import PointSet, sq_dist
from .numbers import ZERO, Fraction, GaussianRational, as_fraction

__all__ = [
    "RigidMotion",
    "MotionTable",
    "RichnessSpectrum",
    "motion_between",
    "richness",
    "enumerate_motions",
    "motion_table",
    "spectrum",
    "guth_katz_ratio",
    "rich_square_sum",
    "good_ks",
    "se2_triple_energy",
    "rich_motions",
]

# primes p = 1 (mod 4) just below 2^31, so residues multiply inside int64
_PRIMES = (2147483629, 2147483549, 2147483497, 2147483489)
_MIX = np.uint64(0x9E3779B97F4A7C15)
_CHUNK = 2_000_000


class RigidMotion(AffineElement):
    """Orientation-preserving isometry ``x -> rot x + trans`` with ``|rot| = 1``."""

    __slots__ = ()

    def __init__(self, rot, trans=ZERO):
        super().__init__(rot, trans)
        if not self.a.is_unit():
            raise ValueError(f"rigid motion needs |rot|^2 = 1, got {self.a.norm()}")

    @property
    def rot(self) -> GaussianRational:
        return self.a

    @property
    def trans(self) -> GaussianRational:
        return self.b


def motion_between(p, q, p2, q2) -> RigidMotion:
    """The unique rigid motion sending ``p -> p2`` and ``q -> q2``."""
    p, q, p2, q2 = (GaussianRational.coerce(v) for v in (p, q, p2, q2))
    if p == q:
        raise ValueError("degenerate segment")
    if sq_dist(p, q) != sq_dist(p2, q2):
        raise ValueError("incongruent segments")
    rot = (q2 - p2) / (q - p)
    return RigidMotion(rot, p2 - rot * p)


def richness(theta: AffineElement, P: PointSet) -> int:
    """``|P ∩ θP|``, counted as the points of ``P`` that ``θ`` maps into ``P``."""
    return sum(1 for p in P if act(theta, p) in P)


@dataclass
class MotionTable:
    """All motions of richness at least 2, with their segment-pair counts.

    Motion ``i`` is represented by one witnessing segment pair
    ``(rep_src[i], rep_dst[i])`` (indices into ``seg_p``/``seg_q``) and its
    richness ``rich[i]``; ``matchCount = rich (rich - 1)``.
    """

    P: PointSet
    seg_p: np.ndarray
    seg_q: np.ndarray
    rep_src: np.ndarray
    rep_dst: np.ndarray
    rich: np.ndarray
    fallback_buckets: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.rich)

    @property
    def match_counts(self) -> np.ndarray:
        return self.rich * (self.rich - 1)

    def motion(self, i: int) -> RigidMotion:
        hit = self._cache.get(i)
        if hit is None:
            s, t = int(self.rep_src[i]), int(self.rep_dst[i])
            P = self.P
            hit = motion_between(
                P[int(self.seg_p[s])], P[int(self.seg_q[s])], P[int(self.seg_p[t])], P[int(self.seg_q[t])]
            )
            self._cache[i] = hit
        return hit

    def items(self) -> Iterator[tuple[RigidMotion, int]]:
        for i in range(len(self)):
            yield self.motion(i), int(self.rich[i] * (self.rich[i] - 1))

    def as_dict(self) -> dict[RigidMotion, int]:
        return dict(self.items())

    def indices_at_least(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.rich >= k)

    def motions_at_least(self, k: int) -> list[RigidMotion]:
        """Exact motions of richness ``>= k`` in canonical order."""
        return sorted((self.motion(int(i)) for i in self.indices_at_least(k)), key=RigidMotion.sort_key)


def _sqrt_minus_one(p: int) -> int:
    for g in range(2, 200):
        r = pow(g, (p - 1) // 4, p)
        if r * r % p == p - 1:
            return r
    raise ConsistencyError(f"no square root of -1 found mod {p}")


def _pick_prime(lengths: list[int]) -> int:
    for p in _PRIMES:
        if all(L % p for L in lengths):
            return p
    raise ConsistencyError("every fingerprint prime divides some squared length")


def _segments(P: PointSet):
    """Ordered segments grouped by squared length, plus per-group tables."""
    ids, distances = P.distance_ids
    n = len(P)
    src, dst = np.nonzero(~np.eye(n, dtype=bool))
    gid = ids[src, dst]
    order = np.argsort(gid, kind="stable")
    seg_p, seg_q, gid = src[order], dst[order], gid[order]
    groups, g_start, g_size = np.unique(gid, return_index=True, return_counts=True)
    return seg_p, seg_q, gid, groups, g_start, g_size, distances


def _triangular_root(count: np.ndarray) -> np.ndarray:
    """``m`` with ``m (m - 1) / 2 == count``, or ``-1`` when no such integer exists."""
    m = ((1 + np.sqrt(1 + 8 * count.astype(np.float64))) / 2).round().astype(np.int64)
    return np.where(m * (m - 1) // 2 == count, m, -1)


def _signs(vals: np.ndarray) -> np.ndarray:
    return (vals > 0).astype(np.int8) - (vals < 0).astype(np.int8)


def enumerate_motions(P: PointSet) -> MotionTable:
    """Every rigid motion with richness >= 2, each with its richness."""
    n = len(P)
    if n < 2:
        raise ValueError("enumerate_motions needs at least 2 points")
    D, xs, ys = P.frame
    seg_p, seg_q, gid, groups, g_start, g_size, distances = _segments(P)
    lengths = [int(distances[g] * D * D) for g in groups]
    p = _pick_prime(lengths)
    root = _sqrt_minus_one(p)
    fI = np.array([(x + root * y) % p for x, y in zip(xs, ys)], dtype=np.int64)
    fJ = np.array([(x - root * y) % p for x, y in zip(xs, ys)], dtype=np.int64)
    inv_len = np.array([pow(L, -1, p) for L in lengths], dtype=np.int64)
    group_pos = np.searchsorted(groups, gid)

    # each unordered source segment once (p < q); the reversed copy yields the same motion
    half = np.flatnonzero(seg_p < seg_q)
    reps = g_size[group_pos[half]]
    ends = np.cumsum(reps)
    total = int(ends[-1])

    keys = np.empty(total, dtype=np.uint64)
    src_seg = np.empty(total, dtype=np.int32 if len(seg_p) < 2**31 else np.int64)
    dst_seg = np.empty_like(src_seg)
    lo = 0
    while lo < len(half):
        base = int(ends[lo - 1]) if lo else 0
        hi = int(np.searchsorted(ends, base + _CHUNK, side="right"))
        hi = max(hi, lo + 1)
        h = half[lo:hi]
        r = reps[lo:hi]
        out_lo, out_hi = base, int(ends[hi - 1])
        s1 = np.repeat(h, r)
        run_start = np.repeat(np.cumsum(r) - r, r)
        s2 = np.repeat(g_start[group_pos[h]], r) + (np.arange(out_hi - out_lo) - run_start)
        a, b = seg_p[s1], seg_q[s1]
        c, d = seg_p[s2], seg_q[s2]
        w1I = (fI[b] - fI[a]) % p
        w1J = (fJ[b] - fJ[a]) % p
        w2I = (fI[d] - fI[c]) % p
        w2J = (fJ[d] - fJ[c]) % p
        linv = inv_len[group_pos[s1]]
        # rot = w2 * conj(w1) / L; conjugation swaps the two residue lanes
        rotI = (w2I * w1J % p) * linv % p
        rotJ = (w2J * w1I % p) * linv % p
        tI = (fI[c] - rotI * fI[a] % p) % p
        tJ = (fJ[c] - rotJ * fJ[a] % p) % p
        k1 = (rotI * p + rotJ).astype(np.uint64)
        k2 = (tI * p + tJ).astype(np.uint64)
        keys[out_lo:out_hi] = k1 * _MIX + k2
        src_seg[out_lo:out_hi] = s1
        dst_seg[out_lo:out_hi] = s2
        lo = hi

    order = np.argsort(keys)
    keys = keys[order]
    src_seg = src_seg[order]
    dst_seg = dst_seg[order]
    del order
    start = np.flatnonzero(np.concatenate(([True], keys[1:] != keys[:-1])))
    del keys
    count = np.diff(np.append(start, total))
    m = _triangular_root(count)
    ok = m >= 2
    _certify(P, seg_p, seg_q, src_seg, dst_seg, start, count, m, ok)

    rep_src = src_seg[start[ok]].astype(np.int64)
    rep_dst = dst_seg[start[ok]].astype(np.int64)
    rich = m[ok]
    bad = np.flatnonzero(~ok)
    if len(bad):
        extra_src, extra_dst, extra_rich = _exact_split(P, seg_p, seg_q, src_seg, dst_seg, start, count, bad)
        rep_src = np.concatenate((rep_src, extra_src))
        rep_dst = np.concatenate((rep_dst, extra_dst))
        rich = np.concatenate((rich, extra_rich))
    return MotionTable(P, seg_p, seg_q, rep_src, rep_dst, rich, fallback_buckets=len(bad))


def _certify(P, seg_p, seg_q, src_seg, dst_seg, start, count, m, ok) -> None:
    """Clear ``ok`` for every bucket that is not provably a single exact motion.

    A bucket holding ``m (m - 1) / 2`` entries certifies as one motion when
    its source-to-image map is a function on exactly ``m`` sources and
    preserves the orientation of every source relative to the first
    witnessing segment.  Such a map is an orientation-preserving isometry
    of the sources, hence the restriction of a single rigid motion.
    Single-entry buckets are one 2-rich motion by construction.
    """
    n = len(P)
    multi = np.flatnonzero(ok & (count >= 2))
    if not len(multi):
        return
    sizes = count[multi]
    entry = np.repeat(start[multi], sizes) + (np.arange(int(sizes.sum())) - np.repeat(np.cumsum(sizes) - sizes, sizes))
    local = np.repeat(np.arange(len(multi), dtype=np.int64), sizes)
    s1 = src_seg[entry]
    s2 = dst_seg[entry]
    rows_cls = np.concatenate((local, local))
    rows_src = np.concatenate((seg_p[s1], seg_q[s1])).astype(np.int64)
    rows_img = np.concatenate((seg_p[s2], seg_q[s2])).astype(np.int64)
    code = np.unique((rows_cls * n + rows_src) * n + rows_img)
    del rows_cls, rows_src, rows_img, entry, s1, s2
    cls_u = code // (n * n)
    src_u = (code // n) % n
    img_u = code % n
    pairs_per = np.bincount(cls_u, minlength=len(multi))
    srcs_per = np.bincount(np.unique(code // n) // n, minlength=len(multi))
    good = (pairs_per == srcs_per) & (srcs_per == m[multi])

    base = start[multi]
    b1, b2 = src_seg[base], dst_seg[base]
    a_src, b_src = seg_p[b1][cls_u], seg_q[b1][cls_u]
    a_img, b_img = seg_p[b2][cls_u], seg_q[b2][cls_u]
    _, xs, ys = P.frame
    dtype = np.int64 if P.frame_bits <= 29 else object
    X = np.array(xs, dtype=dtype)
    Y = np.array(ys, dtype=dtype)

    def orient(o, u, v):
        return _signs((X[u] - X[o]) * (Y[v] - Y[o]) - (Y[u] - Y[o]) * (X[v] - X[o]))

    mismatch = orient(a_src, b_src, src_u) != orient(a_img, b_img, img_u)
    good &= np.bincount(cls_u, weights=mismatch, minlength=len(multi)) == 0
    ok[multi[~good]] = False


def _exact_split(P, seg_p, seg_q, src_seg, dst_seg, start, count, bad):
    """Regroup the entries of uncertified buckets by exact motion."""
    out_src, out_dst, out_rich = [], [], []
    for cls in bad:
        groups: dict[RigidMotion, list[int]] = {}
        for e in range(int(start[cls]), int(start[cls] + count[cls])):
            s, t = int(src_seg[e]), int(dst_seg[e])
            theta = motion_between(P[int(seg_p[s])], P[int(seg_q[s])], P[int(seg_p[t])], P[int(seg_q[t])])
            groups.setdefault(theta, []).append(e)
        for entries in groups.values():
            c = len(entries)
            mm = (1 + isqrt(1 + 8 * c)) // 2
            if mm * (mm - 1) // 2 != c:
                raise ConsistencyError(f"segment-pair count {c} is not of the form m(m-1)/2")
            out_src.append(int(src_seg[entries[0]]))
            out_dst.append(int(dst_seg[entries[0]]))
            out_rich.append(mm)
    return (np.array(out_src, dtype=np.int64), np.array(out_dst, dtype=np.int64), np.array(out_rich, dtype=np.int64))


def motion_table(P: PointSet) -> MotionTable:
    """:func:`enumerate_motions`, memoised on the point set."""
    table = P.__dict__.get("_motion_table")
    if table is None:
        table = enumerate_motions(P)
        P.__dict__["_motion_table"] = table
    return table


@dataclass(frozen=True)
class RichnessSpectrum:
    """``exact[k] = |S_=k|`` and ``cumulative[k] = |S_>=k|`` for ``2 <= k <= n``."""

    n: int
    exact: dict[int, int]
    cumulative: dict[int, int]

    def at_least(self, k: int) -> int:
        if k < 2:
            raise ValueError("S_>=k is only finite for k >= 2")
        return self.cumulative.get(k, 0)

    def rows(self) -> list[tuple[int, int, int]]:
        return [(k, self.exact.get(k, 0), self.cumulative[k]) for k in range(2, self.n + 1)]


def _table_of(P_or_table) -> MotionTable:
    return P_or_table if isinstance(P_or_table, MotionTable) else motion_table(P_or_table)


def spectrum(P_or_table) -> RichnessSpectrum:
    """Bucket the motion table by richness."""
    table = _table_of(P_or_table)
    n = len(table.P)
    if n < 2:
        raise ValueError("spectrum needs at least 2 points")
    counts = np.bincount(table.rich, minlength=n + 1)
    if len(counts) > n + 1 or counts[:2].any():
        raise ConsistencyError("richness outside [2, |P|]")
    exact = {k: int(counts[k]) for k in range(2, n + 1) if counts[k]}
    cum = np.cumsum(counts[::-1])[::-1]
    cumulative = {k: int(cum[k]) for k in range(2, n + 1)}
    return RichnessSpectrum(n, exact, cumulative)


def _spectrum_of(obj) -> RichnessSpectrum:
    return obj if isinstance(obj, RichnessSpectrum) else spectrum(obj)


def guth_katz_ratio(P_or_spectrum) -> Fraction:
    """Empirical constant ``max_k |S_>=k| k^2 / |P|^3``."""
    spec = _spectrum_of(P_or_spectrum)
    n = spec.n
    return max(Fraction(spec.cumulative[k] * k * k, n**3) for k in range(2, n + 1))


def rich_square_sum(P_or_spectrum, k_min: int = 3) -> int:
    """``sum_{k >= k_min} |S_>=k| k^2``."""
    spec = _spectrum_of(P_or_spectrum)
    return sum(spec.cumulative[k] * k * k for k in range(max(k_min, 2), spec.n + 1))


def good_ks(P_or_spectrum, M, C) -> list[int]:
    """``k`` with ``|P| >= k >= |P|/(3CM)`` (and ``k >= 2``) and ``|S_>=k| >= |P|/(3M)``."""
    spec = _spectrum_of(P_or_spectrum)
    M, C = as_fraction(M), as_fraction(C)
    if M <= 0 or C <= 0:
        raise ValueError("M and C must be positive")
    n = spec.n
    lo = max(2, ceil(Fraction(n) / (3 * C * M)))
    need = Fraction(n) / (3 * M)
    return [k for k in range(lo, n + 1) if spec.cumulative[k] >= need]


def se2_triple_energy(P_or_spectrum) -> int:
    """``sum_k |S_=k| k (k-1) (k-2)``: pairs of properly congruent distinct triples."""
    spec = _spectrum_of(P_or_spectrum)
    if spec.n < 3:
        raise ValueError("se2_triple_energy needs at least 3 points")
    return sum(c * k * (k - 1) * (k - 2) for k, c in spec.exact.items())


def rich_motions(P_or_table, k: int) -> list[RigidMotion]:
    """``S_>=k`` as exact motions in canonical order."""
    return _table_of(P_or_table).motions_at_least(k)
