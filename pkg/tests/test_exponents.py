import cmath
import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hrlab.errors import AllDiagonal, InvalidPoint
from hrlab.exponents import (
    EVEN_CASE_NOTE,
    ExactPoint,
    ExponentSet,
    SigmaTriple,
    gcd_diffs,
    generates,
    hyperrigid_sufficient,
    sector_condition,
    sigma_condition,
)


def brute_generates(xi, points):
    """Separation oracle by floating-point evaluation of every monomial."""
    pts = sorted(set(points))
    for a, b in combinations(pts, 2):
        za, zb = a.to_complex(), b.to_complex()
        if not any(abs(za.conjugate() ** m * za**n - zb.conjugate() ** m * zb**n) > 1e-9
                   for m, n in xi.pairs):
            return False
    return True


def real(*xs):
    return [ExactPoint.from_real(x) for x in xs]


def isnytos_points():
    r2, r3 = math.sqrt(2), 2 ** (1 / 3)
    return [ExactPoint(1.0), ExactPoint(r2, 0), ExactPoint(r2, Fraction(1, 2))] + [
        ExactPoint(r3, Fraction(k, 3)) for k in range(3)
    ]


def test_point_normalization():
    assert ExactPoint(2, Fraction(5, 4)).turn == Fraction(1, 4)
    assert ExactPoint(0, Fraction(1, 3)) == ExactPoint(0)
    assert ExactPoint.from_real(-3) == ExactPoint(3, Fraction(1, 2))
    assert ExactPoint.from_complex(1j) == ExactPoint(1, Fraction(1, 4))
    assert ExactPoint(1, Fraction(1, 4)).to_complex() == 1j
    with pytest.raises(InvalidPoint):
        ExactPoint(-1)


def test_gcd_examples():
    assert gcd_diffs(ExponentSet.of((0, 1), (1, 1))) == 1
    assert gcd_diffs(ExponentSet.of((0, 2), (2, 2))) == 2
    with pytest.raises(AllDiagonal):
        gcd_diffs(ExponentSet.of((1, 1)))


def test_sigma_examples():
    assert sigma_condition(ExponentSet.of((1, 2), (2, 2))).as_tuple() == (1, 2, 2)
    assert sigma_condition(ExponentSet.of((0, 1), (1, 1))).as_tuple() == (0, 1, 1)
    assert sigma_condition(ExponentSet.of((1, 2), (1, 1))) is None
    assert sigma_condition(ExponentSet.of((0, 3), (3, 0), (2, 2), (3, 3))).as_tuple() == (0, 3, 2)
    with pytest.raises(ValueError):
        SigmaTriple(1, 2, 1)


def test_generates_examples():
    assert not generates(ExponentSet.of((0, 2)), real(1, -1))
    assert generates(ExponentSet.of((0, 1)), real(1, -1))
    assert generates(ExponentSet.of((0, 2), (0, 3)), isnytos_points())
    assert generates(ExponentSet.of((1, 1)), real(0, 1, 2))
    assert not generates(ExponentSet.of((1, 1)), real(1, -1))


def test_sector_examples():
    assert not sector_condition(0, 2, 2, real(1, -1))
    assert sector_condition(0, 2, 2, real(1, 2))
    assert not sector_condition(0, 2, 2, real(0, 1))
    assert sector_condition(0, 3, 2, [ExactPoint(1, Fraction(1, 6)), ExactPoint(2, Fraction(1, 4))])
    assert not sector_condition(0, 3, 2, [ExactPoint(1, Fraction(1, 6)), ExactPoint(2, Fraction(1, 2))])


def test_verdict_examples():
    grid = [ExactPoint.from_complex(complex(a, b)) for a in (0, 1) for b in (0, 1)]
    assert hyperrigid_sufficient(ExponentSet.of((0, 1), (1, 1)), grid).kind == "ByGcd"
    assert hyperrigid_sufficient(ExponentSet.of((0, 1), (1, 1)), real(-1, 0, 1)).kind == "ByGcd"
    assert hyperrigid_sufficient(ExponentSet.of((0, 2), (2, 2)), real(1, 2)).kind == "BySector"
    v = hyperrigid_sufficient(ExponentSet.of((0, 2), (0, 3)), isnytos_points())
    assert v.kind == "Unknown" and "NoDiagonalPair" in v.warnings
    assert v.to_json()["verdict"] == "Unknown"


def test_verdict_warnings():
    v = hyperrigid_sufficient(ExponentSet.of((0, 2), (2, 2)), real(1, -1))
    assert v.kind == "Unknown" and "NotGenerating" in v.warnings
    v = hyperrigid_sufficient(ExponentSet.of((0, 4), (1, 1)), real(1, 2))
    assert "LowDiagonal" in v.warnings and EVEN_CASE_NOTE in v.notes
    v = hyperrigid_sufficient(ExponentSet.of((0, 3), (1, 1)), real(1, 2))
    assert "LowDiagonal" in v.warnings and not v.notes


def test_finite_separation_criterion_on_disjoint_sectors():
    # points spread over distinct rays inside one 1/n-sector are separated by (0, n)
    n = 3
    pts = [ExactPoint(1 + k / 7, Fraction(k, 40)) for k in range(6)]
    assert sector_condition(0, n, 2, pts)
    assert generates(ExponentSet.of((0, n), (2, 2)), pts)


pairs_st = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=4)
points_st = st.lists(
    st.builds(ExactPoint, st.sampled_from([0.0, 0.5, 1.0, 2.0]),
              st.builds(Fraction, st.integers(0, 11), st.sampled_from([1, 2, 3, 4, 6, 12]))),
    min_size=1, max_size=6,
)


@settings(max_examples=300, deadline=None)
@given(pairs_st, points_st)
def test_generates_matches_brute_force(pairs, points):
    xi = ExponentSet(frozenset(pairs))
    assert generates(xi, points) == brute_generates(xi, points)


@settings(max_examples=200, deadline=None)
@given(pairs_st, points_st)
def test_generation_is_symmetric_under_conjugation(pairs, points):
    xi = ExponentSet(frozenset(pairs))
    assert generates(xi, points) == generates(xi.swapped(), points)


@settings(max_examples=200, deadline=None)
@given(pairs_st, points_st)
def test_verdict_is_consistent(pairs, points):
    xi = ExponentSet(frozenset(pairs))
    v = hyperrigid_sufficient(xi, points)
    sigma = sigma_condition(xi)
    if v.kind in ("ByGcd", "BySector"):
        assert sigma is not None and v.witness == sigma
    if v.kind == "ByGcd":
        assert gcd_diffs(xi) == 1
    if v.kind == "Unknown":
        assert ("NotGenerating" in v.warnings) == (not generates(xi, points))


@settings(max_examples=200, deadline=None)
@given(st.builds(Fraction, st.integers(-50, 50), st.integers(1, 30)), st.floats(0.1, 10))
def test_unit_matches_cmath(turn, modulus):
    p = ExactPoint(modulus, turn)
    assert abs(p.to_complex() - modulus * cmath.exp(2j * math.pi * float(turn))) < 1e-9 * modulus
