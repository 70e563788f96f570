from __future__ import annotations

from fractions import Fraction

import pytest

from trimotion.errors import ValidationError
from trimotion.generators import ap_line, concentric_orbits, random_integer, rotation_orbit, union
from trimotion.geometry import PointSet
from trimotion.io import REPORT_SCHEMA, dumps, validate
from trimotion.numbers import ONE, GaussianRational
from trimotion.pipeline import AnalysisConfig, analyze


def _all_checks(report):
    yield from report["checks"]
    for sec in report["sections"]:
        yield from sec["checks"]
        for br in sec["branches"]:
            yield from br["energy_chain"]["checks"]


def _recompute(check) -> bool:
    lhs, rhs = (Fraction(check[s]) for s in ("lhs", "rhs"))
    return {"<=": lhs <= rhs, "<": lhs < rhs, ">=": lhs >= rhs, "==": lhs == rhs}[check["relation"]]


def test_ap_line_takes_vertical_branch():
    report = analyze(ap_line(32))
    validate(report, REPORT_SCHEMA, "report")
    [sec] = report["sections"]
    assert sec["k"] == 30
    assert {br["type"] for br in sec["branches"]} == {"vertical"}
    v = report["verdict"]
    assert v["structure"] == "lines"
    line = v["line_family"]
    assert (line["lines"], line["top"], line["covered"]) == (1, 32, 32)
    assert line["sigma_emp"] == 1.0


def test_concentric_takes_torus_branch():
    P = concentric_orbits(Fraction(1, 2), ONE, 0, 24, [1, 2, 3])
    report = analyze(P)
    [sec] = report["sections"]
    assert sec["detection"]["torus"][0]["z"] == ["0/1", "0/1"]
    assert report["verdict"]["structure"] == "circle"
    assert report["verdict"]["circle"]["hits"] == 24
    assert report["verdict"]["circle"]["center"] == ["0/1", "0/1"]


def test_random_set_reports_no_structure():
    report = analyze(random_integer(32, 10**6, 7))
    assert Fraction(report["triangles"]["M_emp"]) > 4
    assert report["verdict"]["structure"] == "none"
    assert report["verdict"]["message"] == "no near-optimal structure found"


def test_union_finds_both_coset_types():
    A = ap_line(16)
    B = rotation_orbit(Fraction(1, 2), GaussianRational(3, 5), GaussianRational(8, 1), 16)
    report = analyze(union(A, B), AnalysisConfig(k_policy="all_good"))
    types = {br["type"] for sec in report["sections"] for br in sec["branches"]}
    assert types == {"vertical", "torus"}
    # the 16-point line leaves half of the set uncovered, so only the circle counts
    lines = next(br["lines"] for sec in report["sections"] for br in sec["branches"] if br["type"] == "vertical")
    assert lines["top"] == 16 and lines["no_structure"]
    assert report["verdict"]["structure"] == "circle"
    assert report["verdict"]["circle"]["hits"] == 16


def test_all_good_gives_one_section_per_k():
    report = analyze(ap_line(12), AnalysisConfig(k_policy="all_good"))
    assert [s["k"] for s in report["sections"]] == report["good_ks"] == report["chosen_ks"]
    assert len(report["good_ks"]) > 1


def test_checks_carry_exact_operands():
    P = concentric_orbits(Fraction(1, 2), ONE, 0, 8, [1, 2])
    report = analyze(P, AnalysisConfig(k_policy="all_good"))
    checks = list(_all_checks(report))
    assert checks
    for c in checks:
        assert c["holds"] == _recompute(c), c["name"]


def test_deterministic_and_order_independent():
    P = rotation_orbit(Fraction(1, 3), ONE, GaussianRational(1, 1), 10)
    a = dumps(analyze(P))
    b = dumps(analyze(PointSet(reversed(list(P)))))
    assert a == b


def test_overrides_and_validation():
    report = analyze(ap_line(8), AnalysisConfig(M=2, C=1))
    assert report["constants"] == {"M": "2/1", "C": "1/1", "source": "override"}
    with pytest.raises(ValidationError):
        analyze(ap_line(2))
    with pytest.raises(ValidationError):
        AnalysisConfig(tau_vertical=1)
    with pytest.raises(ValidationError):
        AnalysisConfig(k_policy="smallest")
    with pytest.raises(ValidationError):
        AnalysisConfig.from_mapping({"bogus": 1})


def test_distinct_points_convention():
    report = analyze(ap_line(8), AnalysisConfig(triple_convention="distinct_points"))
    assert report["triangles"]["convention"] == "distinct_points"
    assert report["triangles"]["triples"] == 8 * 7 * 6
