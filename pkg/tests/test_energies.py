from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

import oracles
from strategies import gaussians, nonzero_gaussians, point_sets, rigid, units
from trimotion.affine import IDENTITY, AffineElement, embed_rotation
from trimotion.cosets import detect
from trimotion.energies import (
    additive_energy,
    lemma45_check,
    mixed_additive_energy,
    multiplicative_energy,
    prop43_report,
    ratio_energy,
    sumset_size,
    translated_mult_energy,
)
from trimotion.errors import ValidationError
from trimotion.generators import ap_line, random_integer, rational_rotation, rotation_orbit
from trimotion.geometry import PointSet
from trimotion.motions import rich_motions
from trimotion.numbers import ONE, ZERO, GaussianRational, I

U = rational_rotation(Fraction(1, 2))
AP4 = ap_line(4)


def test_additive_examples():
    assert additive_energy(PointSet([(3, 3)])) == 1
    assert additive_energy(AP4) == oracles.additive_energy(AP4) == 44
    generic = PointSet([(0, 0), (1, 5), (7, 2)])
    assert additive_energy(generic) == oracles.additive_energy(generic) == 15


def test_multiplicative_examples():
    assert multiplicative_energy(PointSet([ONE, I, -ONE, -I])) == 64
    geo = PointSet([1, 2, 4, 8])
    assert multiplicative_energy(geo) == oracles.multiplicative_energy(geo) == 44
    assert multiplicative_energy(PointSet([0, 1])) == oracles.multiplicative_energy(PointSet([0, 1])) == 10


def test_translated_examples():
    P = random_integer(10, 100, 4)
    assert translated_mult_energy(P, ZERO) == multiplicative_energy(P)
    z0 = GaussianRational(2, 1)
    orbit = rotation_orbit(Fraction(1, 2), GaussianRational(3, 1), z0, 16)
    assert translated_mult_energy(orbit, z0) >= Fraction(16**3, 8)
    t = GaussianRational(Fraction(1, 3), Fraction(2, 7))
    e = translated_mult_energy(P, t)
    assert e == oracles.multiplicative_energy(P.translate(t)) and e >= 2 * 10**2 - 10


def test_mixed_examples():
    assert mixed_additive_energy(AP4, ONE) == oracles.mixed_energy(AP4, ONE) == 44
    P = random_integer(7, 50, 2)
    assert mixed_additive_energy(P, ZERO) == 7**3


def test_lemma45_examples():
    z, p = GaussianRational(1, 2), GaussianRational(-3, 0)
    assert lemma45_check(IDENTITY, IDENTITY, z, p)
    assert lemma45_check(IDENTITY, embed_rotation(U, z), z, p)
    with pytest.raises(ValueError, match="stabiliser violation"):
        lemma45_check(IDENTITY, AffineElement(1, 1), z, p)
    with pytest.raises(ValueError, match="degenerate p"):
        lemma45_check(IDENTITY, IDENTITY, z, z)


def test_ratio_examples():
    z0 = GaussianRational(1, -1)
    orbit = rotation_orbit(Fraction(1, 2), GaussianRational(2, -1), z0, 8)
    r = ratio_energy(orbit, z0, z0)
    assert r.energy == oracles.ratio_energy(orbit, z0, z0)
    assert len(r.repfn) == 15  # u^j for -7 <= j <= 7
    P = ap_line(6)
    z = P[2]
    r = ratio_energy(P, z, GaussianRational(1, 1))
    assert sum(r.repfn.values()) == 5 * 6


def test_sumset_examples():
    assert sumset_size(ap_line(9)) == 17
    assert sumset_size(AP4) == 7 and additive_energy(AP4) * 7 >= 4**4
    generic = PointSet([(0, 0), (1, 5), (7, 2), (11, 13)])
    assert sumset_size(generic) == 10


def _chain(P, k):
    S = rich_motions(P, k)
    return S, detect(S, 2, 2)


def test_prop43_vertical_chain_ap_line():
    P = ap_line(16)
    S, det = _chain(P, 12)
    rep = prop43_report(P, det.vertical[0], S, 12)
    assert rep.branch == "vertical" and rep.holds


def test_prop43_torus_chain_orbit():
    P = rotation_orbit(Fraction(1, 2), 1, 0, 16)
    S, det = _chain(P, 12)
    coset = det.torus[0]
    assert coset.z == ZERO
    rep = prop43_report(P, coset, S, 12)
    assert rep.branch == "torus" and rep.holds
    assert rep.values["best_shift"] == ZERO


def test_prop43_under_rich_member():
    P = ap_line(16)
    S, det = _chain(P, 12)
    with pytest.raises(ValidationError, match="less than"):
        prop43_report(P, det.vertical[0], S + [AffineElement(1, 15)], 12)
    with pytest.raises(ValidationError, match="not in S"):
        prop43_report(P, det.vertical[0], S[:1], 12)


@settings(max_examples=20)
@given(point_sets(1, 6))
def test_energies_match_oracles(P):
    assert additive_energy(P) == oracles.additive_energy(P)
    assert multiplicative_energy(P) == oracles.multiplicative_energy(P)


@settings(max_examples=20)
@given(point_sets(1, 6), nonzero_gaussians)
def test_mixed_and_ratio_match_oracles(P, alpha):
    assert mixed_additive_energy(P, alpha) == oracles.mixed_energy(P, alpha)
    assert mixed_additive_energy(P, alpha) <= additive_energy(P)
    z, gz = P[0], alpha
    assert ratio_energy(P, z, gz).energy == oracles.ratio_energy(P, z, gz)


@settings(max_examples=30)
@given(point_sets(1, 8), gaussians)
def test_energy_invariances(P, t):
    assert additive_energy(P) == additive_energy(P.translate(t))
    assert additive_energy(P) * sumset_size(P) >= len(P) ** 4
    if t:
        assert multiplicative_energy(P) == multiplicative_energy(PointSet(t * p for p in P))


@settings(max_examples=30)
@given(point_sets(2, 8), gaussians, gaussians)
def test_ratio_cauchy_schwarz(P, z, gz):
    e = ratio_energy(P, z, gz).energy
    assert e * e <= translated_mult_energy(P, gz) * translated_mult_energy(P, z)


@given(rigid, units, gaussians, gaussians)
def test_lemma45_property(g, u, z, p):
    if p == z:
        p = z + ONE
    assert lemma45_check(g, embed_rotation(u, z), z, p)


def test_lemma45_general_affine():
    rng = random.Random(9)
    for _ in range(50):
        a = GaussianRational(rng.randint(1, 9), rng.randint(-9, 9))
        g = AffineElement(a, GaussianRational(rng.randint(-5, 5), 1))
        z = GaussianRational(rng.randint(-5, 5), rng.randint(-5, 5))
        h = AffineElement(GaussianRational(2, rng.randint(1, 3)), ZERO)
        h = AffineElement(h.a, z * (ONE - h.a))  # non-rigid stabiliser element
        p = z + GaussianRational(rng.randint(1, 4), 0)
        assert lemma45_check(g, h, z, p)
