"""Additive, multiplicative, mixed and ratio energies of a point set.

All energies are ``sum r(w)^2`` over an exact representation function
built by hashing; the quadruple definitions are only used as test oracles.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Union

from .affine import AffineElement, InequalityCheck, act, in_torus, mul
from .errors import ValidationError
from .geometry import PointSet
from .motions import richness
from .numbers import ZERO, GaussianRational

__all__ = [
    "energy_of",
    "additive_energy",
    "multiplicative_energy",
    "translated_mult_energy",
    "mixed_additive_energy",
    "mixed_rep_fn",
    "lemma45_check",
    "ratio_energy",
    "RatioEnergy",
    "sumset_size",
    "prop43_report",
    "Prop43Report",
]


def energy_of(rep: Counter) -> int:
    return sum(c * c for c in rep.values())


def additive_energy(P: PointSet) -> int:
    """``#{p1 + p2 = p3 + p4}``."""
    pts = list(P)
    return energy_of(Counter(p + q for p in pts for q in pts))


def multiplicative_energy(P: PointSet) -> int:
    """``#{p1 p2 = p3 p4}`` over the complex numbers; zero products are counted."""
    pts = list(P)
    return energy_of(Counter(p * q for p in pts for q in pts))


def translated_mult_energy(P: PointSet, t) -> int:
    return multiplicative_energy(P.translate(t))


def mixed_rep_fn(P: PointSet, alpha) -> Counter:
    """``w -> #{(p, q) : q - alpha p = w}``."""
    alpha = GaussianRational.coerce(alpha)
    pts = list(P)
    scaled = [alpha * p for p in pts]
    return Counter(q - ap for ap in scaled for q in pts)


def mixed_additive_energy(P: PointSet, alpha) -> int:
    """``#{q - alpha p = q' - alpha p'}``."""
    return energy_of(mixed_rep_fn(P, alpha))


def lemma45_check(g: AffineElement, h: AffineElement, z, p) -> bool:
    """For ``h`` fixing ``z`` and ``q = gh . p``: ``(q - g.z) / (p - z) == g_1 h_1``.

    The left side is computed from the action alone, the right side from
    the multipliers alone.
    """
    z, p = GaussianRational.coerce(z), GaussianRational.coerce(p)
    if not in_torus(h, z):
        raise ValueError("stabiliser violation: h does not fix z")
    if p == z:
        raise ValueError("degenerate p: p equals z")
    q = act(mul(g, h), p)
    return (q - act(g, z)) / (p - z) == g.a * h.a


@dataclass
class RatioEnergy:
    repfn: Counter
    energy: int


def ratio_energy(P: PointSet, z, gz) -> RatioEnergy:
    """Representation function of ``(q - gz) / (p - z)`` over ``p != z``."""
    z, gz = GaussianRational.coerce(z), GaussianRational.coerce(gz)
    pts = list(P)
    shifted = [q - gz for q in pts]
    rep: Counter = Counter()
    for p in pts:
        if p == z:
            continue
        dp = p - z
        for s in shifted:
            rep[s / dp] += 1
    return RatioEnergy(rep, energy_of(rep))


def sumset_size(P: PointSet) -> int:
    """``|P + P|``."""
    pts = list(P)
    return len({p + q for p in pts for q in pts})


@dataclass
class Prop43Report:
    """Energy chain for one rich coset of ``S``.

    ``checks`` carries every inequality with its exact operands.
    ``violations`` lists members of the coset that break a precondition.
    """

    branch: str
    k: int
    coset_size: int
    checks: list[InequalityCheck] = field(default_factory=list)
    values: dict = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations and all(c.holds for c in self.checks)


def _coset_members(coset) -> list[AffineElement]:
    return list(coset.members)


def prop43_report(P: PointSet, coset, S, k: int, check_richness: bool = True) -> Prop43Report:
    """Energy lower-bound chains for a vertical or a torus coset of rich motions.

    Vertical coset with common multiplier ``a``: every member ``(a, b)``
    needs ``r_{P - aP}(b) >= k``, giving
    ``|coset| k^2 <= E+(P, aP) <= E+(P)``.

    Torus coset fixing ``z`` with common image ``c``: every member needs
    ``r_{(P - c)/(P - z)}(a) >= k - 1``, giving
    ``|coset| (k-1)^2 <= E_ratio`` and ``E_ratio^2 <= E×(P - c) E×(P - z)``.

    Raises :class:`ValidationError` when a member is outside ``S`` or
    (with ``check_richness``) some element of ``S`` is less than ``k``-rich.
    """
    from .cosets import TorusCoset, VerticalCoset

    members = _coset_members(coset)
    S_set = set(S)
    outside = [m for m in members if m not in S_set]
    if outside:
        raise ValidationError(f"{len(outside)} coset members are not in S")
    if check_richness:
        poor = [(m, r) for m in S_set if (r := richness(m, P)) < k]
        if poor:
            m, r = poor[0]
            raise ValidationError(f"{len(poor)} elements of S are less than {k}-rich, e.g. {m} with richness {r}")
    n = len(P)
    if isinstance(coset, VerticalCoset):
        rep = mixed_rep_fn(P, coset.a)
        report = Prop43Report("vertical", k, len(members))
        for m in members:
            if rep[m.b] < k:
                report.violations.append(f"r_(P-aP)({m.b}) = {rep[m.b]} < {k}")
        mixed = energy_of(rep)
        add = additive_energy(P)
        lower = len(members) * k * k
        report.values = {"mixed_energy": mixed, "additive_energy": add, "multiplier": coset.a}
        report.checks += [
            InequalityCheck("vertical_lower_bound", lower, mixed, "<=", lower <= mixed),
            InequalityCheck("mixed_below_additive", mixed, add, "<=", mixed <= add),
            # the proven reading |coset| k^2 versus the stated |coset| k^3 / |P|
            InequalityCheck("additive_energy_proven", lower, add, "<=", lower <= add),
            InequalityCheck(
                "additive_energy_stated",
                _frac(len(members) * k**3, n),
                add,
                "<=",
                _frac(len(members) * k**3, n) <= add,
            ),
        ]
        return report
    if isinstance(coset, TorusCoset):
        ratio = ratio_energy(P, coset.z, coset.c)
        report = Prop43Report("torus", k, len(members))
        for m in members:
            if ratio.repfn[m.a] < k - 1:
                report.violations.append(f"r_ratio({m.a}) = {ratio.repfn[m.a]} < {k - 1}")
        e_c = translated_mult_energy(P, coset.c)
        e_z = translated_mult_energy(P, coset.z)
        lower = len(members) * (k - 1) ** 2
        report.values = {
            "ratio_energy": ratio.energy,
            "mult_energy_shift_image": e_c,
            "mult_energy_shift_center": e_z,
            "best_shift": coset.c if e_c >= e_z else coset.z,
            "zero_in_shift": ZERO in P.translate(coset.c) or ZERO in P.translate(coset.z),
        }
        best = max(e_c, e_z)
        report.checks += [
            InequalityCheck("torus_lower_bound", lower, ratio.energy, "<=", lower <= ratio.energy),
            InequalityCheck(
                "ratio_cauchy_schwarz_squared", ratio.energy**2, e_c * e_z, "<=", ratio.energy**2 <= e_c * e_z
            ),
            InequalityCheck("translated_mult_energy", lower, best, "<=", lower <= best),
        ]
        return report
    raise TypeError(f"not a coset: {coset!r}")


def _frac(a: int, b: int):
    from fractions import Fraction

    return Fraction(a, b)


Coset = Union["VerticalCoset", "TorusCoset"]  # noqa: F821
