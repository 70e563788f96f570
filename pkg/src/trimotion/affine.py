"""The affine group of the complex line and its rigid-motion subgroup.

Elements are pairs ``(a, b)`` acting by ``x -> a x + b``; the product is
``(g1, g2)(h1, h2) = (g1 h1, g1 h2 + g2)``.  Rigid motions are the
elements with ``|a|^2 = 1``.  Angles never appear: a rotation is its
unit-modulus multiplier.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from math import gcd
from typing import NamedTuple

from .numbers import ONE, ZERO, Fraction, GaussianRational, as_fraction

__all__ = [
    "AffineElement",
    "IDENTITY",
    "mul",
    "inv",
    "act",
    "embed_rotation",
    "embed_translation",
    "in_torus",
    "in_unipotent",
    "is_rigid",
    "group_energy",
    "star_energy",
    "GroupEnergy",
    "lemma31_report",
    "InequalityCheck",
]


class AffineElement:
    """``x -> a x + b`` with ``a != 0``; also a point of the group plane."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=ZERO):
        a = GaussianRational.coerce(a)
        b = GaussianRational.coerce(b)
        if not a:
            raise ValueError("affine element needs a nonzero multiplier")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def key(self) -> tuple:
        return (self.a.key(), self.b.key())

    def sort_key(self) -> tuple:
        return (*self.a.sort_key(), *self.b.sort_key())

    def __eq__(self, other):
        if isinstance(other, AffineElement):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __mul__(self, other):
        if isinstance(other, AffineElement):
            return mul(self, other)
        return NotImplemented

    def __call__(self, x) -> GaussianRational:
        return act(self, x)

    def inverse(self) -> "AffineElement":
        return inv(self)

    def is_rigid(self) -> bool:
        return self.a.is_unit()

    def __repr__(self):
        return f"{type(self).__name__}({self.a}, {self.b})"


IDENTITY = AffineElement(ONE, ZERO)


def _same_kind(g: AffineElement, h: AffineElement, a, b) -> AffineElement:
    # products and inverses of rigid motions stay rigid
    cls = type(g) if type(g) is type(h) else AffineElement
    return cls(a, b)


def mul(g: AffineElement, h: AffineElement) -> AffineElement:
    return _same_kind(g, h, g.a * h.a, g.a * h.b + g.b)


def inv(g: AffineElement) -> AffineElement:
    ainv = ONE / g.a
    return type(g)(ainv, -g.b * ainv)


def act(g: AffineElement, x) -> GaussianRational:
    return g.a * GaussianRational.coerce(x) + g.b


def is_rigid(g: AffineElement) -> bool:
    return g.a.is_unit()


def embed_rotation(u, center) -> AffineElement:
    """Rotation by the unit multiplier ``u`` about ``center``: ``(u, center (1 - u))``."""
    u = GaussianRational.coerce(u)
    center = GaussianRational.coerce(center)
    if not u.is_unit():
        raise ValueError(f"rotation multiplier must have |u|^2 = 1, got {u.norm()}")
    return AffineElement(u, center * (ONE - u))


def embed_translation(t) -> AffineElement:
    return AffineElement(ONE, t)


def in_torus(h: AffineElement, z) -> bool:
    """Whether ``h`` fixes ``z`` (membership in the stabiliser torus)."""
    z = GaussianRational.coerce(z)
    return act(h, z) == z


def in_unipotent(g: AffineElement) -> bool:
    return g.a == ONE


def _raw(g: AffineElement) -> tuple[int, int, int, int, int, int]:
    return (g.a.x, g.a.y, g.a.d, g.b.x, g.b.y, g.b.d)


def _canon(x: int, y: int, d: int) -> tuple[int, int, int]:
    c = gcd(x, y, d)
    return (x // c, y // c, d // c)


def _mul_raw(g: tuple, h: tuple) -> tuple:
    """Integer-only product; the result is the canonical key of ``g h``."""
    gx, gy, gd, gbx, gby, gbd = g
    hx, hy, hd, hbx, hby, hbd = h
    a = _canon(gx * hx - gy * hy, gx * hy + gy * hx, gd * hd)
    scale = gd * hbd
    b = _canon(
        (gx * hbx - gy * hby) * gbd + gbx * scale,
        (gx * hby + gy * hbx) * gbd + gby * scale,
        scale * gbd,
    )
    return a + b


def _from_raw(key: tuple) -> AffineElement:
    return AffineElement(GaussianRational.from_parts(*key[:3]), GaussianRational.from_parts(*key[3:]))


@dataclass(frozen=True)
class GroupEnergy:
    energy: int
    raw_rep_fn: Counter

    @property
    def rep_fn(self) -> Counter:
        """Representation function keyed by group elements."""
        return Counter({_from_raw(k): c for k, c in self.raw_rep_fn.items()})


def group_energy(S: Iterable[AffineElement]) -> GroupEnergy:
    """Quadruple count of ``g1 g2^-1 = g3 g4^-1`` via the quotient representation function."""
    S = _as_unique_list(S)
    elems = [_raw(g) for g in S]
    inverses = [_raw(inv(t)) for t in S]
    rep: Counter = Counter(_mul_raw(phi, tinv) for phi in elems for tinv in inverses)
    return GroupEnergy(sum(c * c for c in rep.values()), rep)


def star_energy(S: Iterable[AffineElement]) -> int:
    """Quadruple count of ``g1 g2 = g3 g4``."""
    elems = [_raw(g) for g in _as_unique_list(S)]
    rep: Counter = Counter(_mul_raw(g, h) for g in elems for h in elems)
    return sum(c * c for c in rep.values())


def _as_unique_list(S: Iterable[AffineElement]) -> list[AffineElement]:
    out = list(dict.fromkeys(S))
    if not out:
        raise ValueError("energy of an empty set")
    return out


class InequalityCheck(NamedTuple):
    """``lhs <relation> rhs`` with exact operands and the evaluated verdict."""

    name: str
    lhs: object
    rhs: object
    relation: str
    holds: bool

    def as_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "relation": self.relation, "holds": self.holds}


def lemma31_report(P, k: int, C_emp, S: Sequence[AffineElement] | None = None, energy: int | None = None) -> InequalityCheck:
    """Compare ``k^6 |S|^4 / (C |P|^7)`` against ``E(S)`` for ``S = S_{>=k}(P)``.

    ``S`` and its energy may be passed in when already computed.
    """
    C_emp = as_fraction(C_emp)
    if C_emp <= 0:
        raise ValueError("empirical constant must be positive")
    if S is None:
        from .motions import rich_motions

        S = rich_motions(P, k)
    if not S:
        raise ValueError(f"S_>=k is empty for k={k}")
    lhs = Fraction(k**6 * len(S) ** 4) / (C_emp * len(P) ** 7)
    rhs = energy if energy is not None else group_energy(S).energy
    return InequalityCheck("large_group_energy", lhs, rhs, "<=", lhs <= rhs)
