import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from hrlab.choquet import (
    AtomicMeasure,
    IsnytosParams,
    MonomialSpace,
    boundary_membership,
    boundary_table_csv,
    isnytos_instance,
    measure_moment,
    monomial_value,
    verify_representing,
)
from hrlab.errors import BetaSumViolation, DividesViolation, GcdViolation, NotSeparating, PairMismatch
from hrlab.exponents import ExactPoint

HALF = Fraction(1, 2)
PARAMS = IsnytosParams((2, 3), ((0, 2), (0, 3)), (HALF, HALF))
X3 = [ExactPoint.from_real(x) for x in (-1, 0, 1)]
SQUARES = MonomialSpace.of((1, 1))


def test_isnytos_instance_values():
    inst = isnytos_instance(PARAMS)
    assert inst.radii == pytest.approx((math.sqrt(2), 2 ** (1 / 3)))
    assert inst.alphas == pytest.approx((0.25, 1 / 6))
    assert len(inst.points) == 6 and ExactPoint(1.0) in inst.points
    assert sorted(inst.measure.weights) == pytest.approx([1 / 6] * 3 + [0.25] * 2)
    assert inst.measure.total == pytest.approx(1)


def test_isnytos_validation():
    with pytest.raises(DividesViolation):
        IsnytosParams((2, 4), ((0, 2), (0, 4)), (HALF, HALF)).validate()
    with pytest.raises(BetaSumViolation):
        IsnytosParams((2, 3), ((0, 2), (0, 3)), (HALF, Fraction(1, 3))).validate()
    with pytest.raises(GcdViolation):
        IsnytosParams((4, 6), ((0, 4), (0, 6)), (HALF, HALF)).validate()
    with pytest.raises(PairMismatch):
        IsnytosParams((2, 3), ((0, 2), (0, 2)), (HALF, HALF)).validate()


def test_exact_moments():
    mu = isnytos_instance(PARAMS).measure
    assert measure_moment(mu, 0, 0) == pytest.approx(1)
    assert measure_moment(mu, 0, 2) == pytest.approx(1, abs=1e-15)
    assert measure_moment(mu, 0, 1) == 0  # exact cancellation over both orbits
    assert measure_moment(mu, 0, 3) == pytest.approx(1)


def test_verify_representing():
    inst = isnytos_instance(PARAMS)
    one = ExactPoint(1.0)
    assert verify_representing(inst.measure, inst.space, one)
    assert not verify_representing(inst.measure, MonomialSpace.of((0, 2), (0, 3), (0, 1)), one)


def test_three_point_line():
    zero, one, minus = X3[1], X3[2], X3[0]
    r0 = boundary_membership(X3, SQUARES, zero, require_separation=False)
    assert r0.in_boundary and r0.weight == pytest.approx(1)
    r1 = boundary_membership(X3, SQUARES, one, require_separation=False)
    assert not r1.in_boundary and r1.weight <= 1e-8
    assert r1.witness.weight_at(minus) == pytest.approx(1, abs=1e-8)
    with pytest.raises(NotSeparating):
        boundary_membership(X3, SQUARES, one)


def test_rich_space_pins_every_point():
    pts = [ExactPoint.from_real(x) for x in (-1, 0, 1, 2)]
    space = MonomialSpace.of((0, 1), (0, 2), (0, 3))
    assert all(boundary_membership(pts, space, p).in_boundary for p in pts)


def test_boundary_against_scipy(rng):
    for _ in range(40):
        pts = sorted({ExactPoint(float(rng.choice([0.5, 1, 1.5, 2])), Fraction(int(rng.integers(0, 6)), 6))
                      for _ in range(6)})
        space = MonomialSpace.of((0, 1), (1, 1))
        for lam in pts:
            res = boundary_membership(pts, space, lam)
            rows, rhs = [np.ones(len(pts))], [1.0]
            for m, n in [(0, 1), (1, 1)]:
                vals = np.array([monomial_value(p, m, n) for p in pts])
                goal = monomial_value(lam, m, n)
                rows += [vals.real, vals.imag]
                rhs += [goal.real, goal.imag]
            c = np.array([1.0 if p == lam else 0.0 for p in pts])
            ref = linprog(c, A_eq=np.array(rows), b_eq=np.array(rhs), bounds=[(0, None)] * len(pts))
            assert res.weight == pytest.approx(ref.fun, abs=1e-8)


def test_isnytos_point_is_off_boundary():
    inst = isnytos_instance(PARAMS)
    res = boundary_membership(inst.points, inst.space, ExactPoint(1.0))
    assert not res.in_boundary and res.weight <= 1e-8 and res.separating
    assert verify_representing(res.witness, inst.space, ExactPoint(1.0), tol=1e-8)


def test_measure_merging_and_csv():
    p = ExactPoint(1.0)
    mu = AtomicMeasure(((p, 0.25), (p, 0.25), (ExactPoint(2.0), 0.5)))
    assert mu.weight_at(p) == 0.5 and not mu.is_dirac()
    with pytest.raises(ValueError):
        AtomicMeasure(((p, -1.0),))
    res = boundary_membership(X3, SQUARES, X3[1], require_separation=False)
    assert boundary_table_csv([res]).splitlines() == ["modulus,turn,optimal_weight,in_boundary", "0.0,0,1.0,True"]
