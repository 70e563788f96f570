"""Rich lines of a motion set viewed as points ``(a, b)`` of the group plane.

A vertical line ``a = const`` is a left coset of the translation subgroup.
A non-vertical line ``b = c - z a`` is a left coset of the stabiliser of
``z``: its members are exactly the elements sending ``z`` to ``c``.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass
from math import ceil, gcd

from .affine import AffineElement, act, in_torus, inv, mul
from .errors import ValidationError
from .motions import RigidMotion
from .numbers import GaussianRational

__all__ = [
    "VerticalCoset",
    "TorusCoset",
    "DetectionReport",
    "auto_threshold",
    "detect_vertical",
    "detect_torus_cosets",
    "detect",
    "coset_rep_in_SE2",
]


@dataclass(frozen=True)
class VerticalCoset:
    a: GaussianRational
    members: tuple[AffineElement, ...]

    def __len__(self) -> int:
        return len(self.members)

    def sort_key(self) -> tuple:
        return (-len(self.members), self.a.sort_key())


@dataclass(frozen=True)
class TorusCoset:
    """Members all send ``z`` to ``c``."""

    z: GaussianRational
    c: GaussianRational
    members: tuple[AffineElement, ...]

    def __len__(self) -> int:
        return len(self.members)

    def sort_key(self) -> tuple:
        return (-len(self.members), self.z.sort_key(), self.c.sort_key())


@dataclass(frozen=True)
class DetectionReport:
    """Cosets above threshold plus the largest occupancies ``H`` (non-vertical) and ``V`` (vertical)."""

    vertical: list[VerticalCoset]
    torus: list[TorusCoset]
    H: int
    V: int
    tau_vertical: int
    tau_torus: int


def auto_threshold(size: int) -> int:
    return max(4, ceil(size / 8))


def _unique_sorted(S: Iterable[AffineElement]) -> list[AffineElement]:
    return sorted(set(S), key=AffineElement.sort_key)


def _check_tau(tau: int) -> None:
    if not isinstance(tau, int) or tau < 2:
        raise ValidationError(f"threshold must be an integer >= 2, got {tau!r}")


def _vertical_groups(S: list[AffineElement]) -> list[VerticalCoset]:
    groups: dict[GaussianRational, list[AffineElement]] = defaultdict(list)
    for g in S:
        groups[g.a].append(g)
    out = [VerticalCoset(a, tuple(ms)) for a, ms in groups.items()]
    out.sort(key=VerticalCoset.sort_key)
    return out


def detect_vertical(S: Iterable[AffineElement], tau: int) -> list[VerticalCoset]:
    """Groups of ``S`` sharing a multiplier, of size at least ``tau``."""
    _check_tau(tau)
    return [v for v in _vertical_groups(_unique_sorted(S)) if len(v) >= tau]


def _canon(x: int, y: int, d: int) -> tuple[int, int, int]:
    if d < 0:
        x, y, d = -x, -y, -d
    c = gcd(x, y, d)
    return (x // c, y // c, d // c)


def _line_key(g: AffineElement, h: AffineElement) -> tuple | None:
    """Canonical integer ``(z, c)`` of the line through ``g`` and ``h``; ``None`` if vertical."""
    ga, gb, ha, hb = g.a, g.b, h.a, h.b
    # da = h.a - g.a and db = h.b - g.b as integer triples
    dax, day, dad = ha.x * ga.d - ga.x * ha.d, ha.y * ga.d - ga.y * ha.d, ha.d * ga.d
    if not dax and not day:
        return None
    dbx, dby, dbd = hb.x * gb.d - gb.x * hb.d, hb.y * gb.d - gb.y * hb.d, hb.d * gb.d
    # z = -db / da
    norm = dax * dax + day * day
    z = _canon(-(dbx * dax + dby * day) * dad, -(dby * dax - dbx * day) * dad, dbd * norm)
    zx, zy, zd = z
    # c = g.b + z g.a
    px, py, pd = zx * ga.x - zy * ga.y, zx * ga.y + zy * ga.x, zd * ga.d
    c = _canon(gb.x * pd + px * gb.d, gb.y * pd + py * gb.d, gb.d * pd)
    return z, c


def _torus_lines(S: list[AffineElement]) -> list[TorusCoset]:
    """Every non-vertical line through at least two elements of ``S``.

    Lines are found by pair hashing from their least member: for each
    ``i`` the later elements are grouped by the exact ``(z, c)`` of the line
    through ``i``; a line is emitted only from the first index it contains.
    """
    seen: set[tuple] = set()
    lines = []
    for i, g in enumerate(S):
        through: dict[tuple, list[AffineElement]] = defaultdict(list)
        for h in S[i + 1 :]:
            key = _line_key(g, h)
            if key is not None:
                through[key].append(h)
        for key, rest in through.items():
            if key in seen:
                continue
            seen.add(key)
            z, c = (GaussianRational.from_parts(*part) for part in key)
            lines.append(TorusCoset(z, c, (g, *rest)))
    return lines


def _recheck(line: TorusCoset, S: list[AffineElement]) -> TorusCoset:
    members = tuple(m for m in S if act(m, line.z) == line.c)
    if members != line.members:
        # pair hashing and membership must agree exactly
        from .errors import ConsistencyError

        raise ConsistencyError(f"torus line z={line.z}, c={line.c} membership mismatch")
    return line


def detect_torus_cosets(S: Iterable[AffineElement], tau: int) -> list[TorusCoset]:
    """Non-vertical lines holding at least ``tau`` elements of ``S``."""
    _check_tau(tau)
    S = _unique_sorted(S)
    lines = [t for t in _torus_lines(S) if len(t) >= tau]
    lines = [_recheck(t, S) for t in lines]
    lines.sort(key=TorusCoset.sort_key)
    return lines


def _select(lines: list, tau: int | str, size: int) -> tuple[list, int]:
    """Lines at or above threshold; ``"auto"`` scans down from the default to 4."""
    if tau != "auto":
        _check_tau(tau)
        return [x for x in lines if len(x) >= tau], tau
    t = auto_threshold(size)
    top = max((len(x) for x in lines), default=0)
    if top < t:
        # scanning downward stops at the largest occupancy present
        t = max(4, top)
    return [x for x in lines if len(x) >= t], t


def detect(S: Iterable[AffineElement], tau_vertical: int | str = "auto", tau_torus: int | str = "auto") -> DetectionReport:
    """Both detectors plus the occupancy maxima ``H`` and ``V``."""
    S = _unique_sorted(S)
    vertical = _vertical_groups(S)
    torus = _torus_lines(S)
    V = max((len(v) for v in vertical), default=0)
    H = max((len(t) for t in torus), default=min(1, len(S)))
    vsel, tv = _select([v for v in vertical if len(v) >= 2], tau_vertical, len(S))
    tsel, tt = _select(torus, tau_torus, len(S))
    # two-member lines are automatic, so only larger ones are rechecked
    for t in tsel:
        if len(t) >= 3:
            _recheck(t, S)
    tsel.sort(key=TorusCoset.sort_key)
    return DetectionReport(vsel, tsel, H, V, tv, tt)


def coset_rep_in_SE2(coset: TorusCoset, S: Iterable[AffineElement]) -> RigidMotion:
    """Least member ``theta`` of ``coset`` in ``S``, with ``theta^-1 m`` checked rigid and fixing ``z``."""
    S_set = set(S)
    inside = sorted((m for m in coset.members if m in S_set), key=AffineElement.sort_key)
    if not inside:
        raise ValidationError("empty intersection: no coset member lies in S")
    theta = inside[0]
    if not theta.is_rigid():
        raise ValidationError(f"verification failed: representative {theta} is not rigid")
    theta_inv = inv(theta)
    for m in inside:
        h = mul(theta_inv, m)
        if not h.a.is_unit():
            raise ValidationError(f"verification failed: {m} is not rigid")
        if not in_torus(h, coset.z):
            raise ValidationError(f"verification failed: {m} does not send {coset.z} to {coset.c}")
    return RigidMotion(theta.a, theta.b)
