from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

import oracles
from strategies import point_sets
from trimotion.affine import AffineElement
from trimotion.errors import ConsistencyError
from trimotion.generators import ap_line, lattice, random_integer, rotation_orbit
from trimotion.geometry import PointSet
from trimotion.motions import (
    RigidMotion,
    enumerate_motions,
    good_ks,
    guth_katz_ratio,
    motion_between,
    rich_motions,
    richness,
    se2_triple_energy,
    spectrum,
)
from trimotion.numbers import ONE, ZERO, GaussianRational, I

SQUARE = PointSet([(0, 0), (1, 0), (0, 1), (1, 1)])


def test_motion_between_examples():
    m = motion_between((0, 0), (1, 0), (0, 0), (0, 1))
    assert (m.rot, m.trans) == (I, ZERO)
    m = motion_between((0, 0), (1, 0), (2, 0), (3, 0))
    assert (m.rot, m.trans) == (ONE, GaussianRational(2))
    m = motion_between((0, 0), (3, 4), (0, 0), (5, 0))
    assert m.rot == GaussianRational(Fraction(3, 5), Fraction(-4, 5)) and m.trans == ZERO
    assert m(GaussianRational(3, 4)) == GaussianRational(5)


def test_motion_between_errors():
    with pytest.raises(ValueError, match="degenerate segment"):
        motion_between((1, 1), (1, 1), (0, 0), (0, 0))
    with pytest.raises(ValueError, match="incongruent segments"):
        motion_between((0, 0), (1, 0), (0, 0), (2, 0))


def test_rigid_motion_requires_unit():
    with pytest.raises(ValueError):
        RigidMotion(GaussianRational(1, 1), 0)


def test_richness_examples():
    line = ap_line(3)
    assert richness(AffineElement(1, 0), line) == 3
    assert richness(AffineElement(1, 1), line) == 2
    assert richness(AffineElement(-1, 2), line) == 3  # half turn about 1


def test_two_points():
    P = PointSet([(0, 0), (1, 0)])
    table = enumerate_motions(P).as_dict()
    assert table == {
        RigidMotion(1, 0): 2,
        RigidMotion(-1, 1): 2,
    }
    assert guth_katz_ratio(P) == 1


def test_three_collinear():
    spec = spectrum(ap_line(3))
    assert spec.at_least(3) == 2
    assert se2_triple_energy(spec) == 12 == oracles.proper_congruent_pairs(ap_line(3))


def test_unit_square():
    spec = spectrum(SQUARE)
    assert spec.exact == {2: 16, 4: 4}
    assert spec.at_least(4) == 4
    assert set(rich_motions(SQUARE, 4)) == {
        RigidMotion(1, 0),
        RigidMotion(I, GaussianRational(1, 0)),
        RigidMotion(-1, GaussianRational(1, 1)),
        RigidMotion(-I, GaussianRational(0, 1)),
    }
    assert se2_triple_energy(SQUARE) == 96


def test_ap4_has_half_turn():
    assert spectrum(ap_line(4)).at_least(4) == 2


def test_generic_three_points():
    P = PointSet([(0, 0), (1, 0), (0, 3)])
    assert se2_triple_energy(P) == 6 == oracles.proper_congruent_pairs(P)


def test_guth_katz_pins():
    # the full spectra agree with literal enumeration
    for P in (lattice(4), ap_line(8)):
        assert spectrum(P).exact == dict(oracles.spectrum_exact(P))
    assert guth_katz_ratio(lattice(4)) == Fraction(13, 16)
    assert guth_katz_ratio(ap_line(8)) == Fraction(45, 64)


def test_good_ks_threshold_arithmetic():
    P = ap_line(8)
    spec = spectrum(P)
    # huge M: window floor drops to 2, size threshold drops below 1
    assert good_ks(spec, 10**6, 1) == list(range(2, 9))
    # tiny M: nothing reaches |P| / (3M)
    assert good_ks(spec, Fraction(1, 10**6), 1) == []
    with pytest.raises(ValueError):
        good_ks(spec, 0, 1)


@pytest.mark.parametrize("P", [ap_line(32), rotation_orbit(Fraction(1, 2), 1, 0, 32)], ids=["ap_line", "orbit"])
def test_good_ks_nonempty(P):
    from trimotion.geometry import class_table

    n = len(P)
    assert good_ks(P, Fraction(len(class_table(P)), n * n), guth_katz_ratio(P))


def test_spectrum_errors():
    with pytest.raises(ValueError):
        spectrum(PointSet([(0, 0)]))
    with pytest.raises(ValueError):
        spectrum(SQUARE).at_least(1)
    with pytest.raises(ValueError):
        se2_triple_energy(PointSet([(0, 0), (1, 0)]))


def test_big_denominator_orbit_matches_oracle():
    P = rotation_orbit(Fraction(2, 7), GaussianRational(3, 1), GaussianRational(Fraction(1, 3), 0), 9)
    assert P.frame_bits > 29
    table = enumerate_motions(P)
    pairs = oracles.segment_pair_counts(P)
    assert {oracles.motion_key(g): c for g, c in table.items()} == dict(pairs)


def test_certification_is_exact_on_random_sets():
    for seed in range(4):
        P = random_integer(13, 5, seed)
        table = enumerate_motions(P)
        assert {oracles.motion_key(g): c for g, c in table.items()} == dict(oracles.segment_pair_counts(P))


@settings(max_examples=30)
@given(point_sets(2, 8))
def test_table_matches_oracle(P):
    table = enumerate_motions(P)
    pairs = oracles.segment_pair_counts(P)
    assert {oracles.motion_key(g): c for g, c in table.items()} == dict(pairs)
    for (rot, trans), c in pairs.items():
        m = oracles.richness_of(rot, trans, P)
        assert c == m * (m - 1)


@settings(max_examples=30)
@given(point_sets(3, 8))
def test_spectrum_invariants(P):
    spec = spectrum(P)
    n = len(P)
    cum = [spec.cumulative[k] for k in range(2, n + 1)]
    assert cum == sorted(cum, reverse=True)
    assert spec.cumulative[n] >= 1
    assert all(spec.cumulative[k] == sum(spec.exact.get(j, 0) for j in range(k, n + 1)) for k in range(2, n + 1))
    assert se2_triple_energy(spec) == oracles.proper_congruent_pairs(P)


def test_consistency_error_is_loud():
    assert issubclass(ConsistencyError, RuntimeError)
