from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from strategies import affine, gaussians, rigid
from trimotion.affine import (
    IDENTITY,
    AffineElement,
    act,
    embed_rotation,
    embed_translation,
    group_energy,
    in_torus,
    in_unipotent,
    inv,
    lemma31_report,
    mul,
    star_energy,
)
from trimotion.generators import ap_line, rational_rotation, rotation_orbit
from trimotion.geometry import PointSet, class_table
from trimotion.motions import RigidMotion, good_ks, guth_katz_ratio, rich_motions, spectrum
from trimotion.numbers import ONE, ZERO, GaussianRational, I

U = rational_rotation(Fraction(1, 2))  # (3 + 4i) / 5


def test_mul_examples():
    g = AffineElement(GaussianRational(2, 1), GaussianRational(0, 5))
    assert mul(IDENTITY, g) == g
    assert mul(AffineElement(I, 0), AffineElement(1, 2)) == AffineElement(I, GaussianRational(0, 2))


def test_inv_examples():
    assert inv(AffineElement(1, 7)) == AffineElement(1, -7)
    assert inv(AffineElement(I, 0)) == AffineElement(-I, 0)
    assert inv(AffineElement(2, 3)) == AffineElement(Fraction(1, 2), Fraction(-3, 2))


def test_act_examples():
    x = GaussianRational(3, -2)
    assert act(IDENTITY, x) == x
    assert act(AffineElement(I, 0), 1) == I
    assert act(embed_translation(GaussianRational(1, 1)), x) == x + GaussianRational(1, 1)


def test_zero_multiplier_rejected():
    with pytest.raises(ValueError):
        AffineElement(0, 1)


def test_embed_rotation_examples():
    assert embed_rotation(ONE, GaussianRational(4, 4)) == IDENTITY
    half = embed_rotation(-ONE, ZERO)
    assert half == AffineElement(-1, 0) and act(half, 1) == -ONE
    r = embed_rotation(U, ONE)
    assert r == AffineElement(U, ONE - U) and act(r, ONE) == ONE
    with pytest.raises(ValueError):
        embed_rotation(GaussianRational(2, 0), ZERO)


def test_torus_and_unipotent_examples():
    z = GaussianRational(2, -1)
    assert in_torus(IDENTITY, z)
    assert not in_torus(embed_translation(3), z)
    assert in_torus(embed_rotation(U, z), z)
    assert in_unipotent(AffineElement(1, GaussianRational(5, 2)))
    assert not in_unipotent(AffineElement(I, 0))
    assert in_unipotent(IDENTITY)


def test_group_energy_examples():
    assert group_energy([AffineElement(1, 3)]).energy == 1
    translations = [AffineElement(1, j) for j in range(4)]
    assert group_energy(translations).energy == oracles.group_energy(translations) == 44
    rotations = [AffineElement(U**j, 0) for j in range(4)]
    assert group_energy(rotations).energy == oracles.group_energy(rotations) == 44


def test_star_energy_examples():
    assert star_energy([AffineElement(I, 1)]) == 1
    S = [AffineElement(1, 0), AffineElement(1, 1)]
    assert star_energy(S) == oracles.star_energy(S) == 6


def test_empty_energy_rejected():
    with pytest.raises(ValueError):
        group_energy([])


def _best_k(P):
    spec = spectrum(P)
    n = len(P)
    M = Fraction(len(class_table(P)), n * n)
    C = guth_katz_ratio(spec)
    ks = good_ks(spec, M, C)
    return max(ks, key=lambda k: (spec.at_least(k), k)), C


@pytest.mark.parametrize("P", [ap_line(16), rotation_orbit(Fraction(1, 2), 1, 0, 16)], ids=["ap_line", "orbit"])
def test_lemma31_holds_at_best_k(P):
    k, C = _best_k(P)
    check = lemma31_report(P, k, C)
    assert check.holds
    assert check.rhs == group_energy(rich_motions(P, k)).energy


def test_lemma31_two_points():
    P = PointSet([(0, 0), (1, 0)])
    check = lemma31_report(P, 2, guth_katz_ratio(P))
    # S = {identity, half turn} is a subgroup of order 2, so E = |S|^3
    assert check.rhs == 8 == oracles.group_energy(rich_motions(P, 2))
    assert check.lhs == Fraction(2**6 * 2**4, 2**7)
    with pytest.raises(ValueError):
        lemma31_report(P, 3, 1)


@given(affine, affine, affine)
def test_group_axioms(g, h, k):
    assert mul(mul(g, h), k) == mul(g, mul(h, k))
    assert mul(IDENTITY, g) == g == mul(g, IDENTITY)
    assert mul(g, inv(g)) == IDENTITY == mul(inv(g), g)


@given(affine, affine, gaussians)
def test_action_compatible(g, h, x):
    assert act(mul(g, h), x) == act(g, act(h, x))


@given(rigid, rigid)
def test_rigid_closure(g, h):
    assert isinstance(mul(g, h), RigidMotion) and mul(g, h).is_rigid()
    assert isinstance(inv(g), RigidMotion) and inv(g).is_rigid()


@settings(max_examples=40)
@given(st.lists(affine, min_size=1, max_size=7, unique=True))
def test_energies_match_oracle(S):
    ge = group_energy(S)
    assert sum(ge.rep_fn.values()) == len(S) ** 2
    assert ge.energy == oracles.group_energy(S)
    assert star_energy(S) == oracles.star_energy(S)


@settings(max_examples=40)
@given(st.lists(rigid, min_size=1, max_size=10, unique=True))
def test_star_below_energy_rigid(S):
    assert star_energy(S) <= group_energy(S).energy
