import numpy as np
import pytest
from scipy.optimize import linprog

from hrlab.errors import LpInfeasible
from hrlab.lp import solve_lp


def test_small_known_program():
    # min x0 + 2 x1 s.t. x0 + x1 = 1 -> x = (1, 0)
    res = solve_lp([1, 2], [[1, 1]], [1])
    assert np.allclose(res.x, [1, 0]) and res.objective == pytest.approx(1)
    assert res.duality_gap <= 1e-12


def test_infeasible_and_unbounded():
    with pytest.raises(LpInfeasible):
        solve_lp([1, 1], [[1, 1]], [-1])
    with pytest.raises(LpInfeasible):
        solve_lp([-1, 0], [[1, -1]], [0])


def test_redundant_rows():
    res = solve_lp([0, 1, 0], [[1, 1, 1], [2, 2, 2], [1, 0, -1]], [1, 2, 0])
    assert res.objective == pytest.approx(0)
    assert np.allclose(res.x, [0.5, 0, 0.5])


def test_against_scipy(rng):
    for _ in range(100):
        m, n = int(rng.integers(1, 5)), int(rng.integers(2, 9))
        a = rng.normal(size=(m, n))
        x0 = rng.uniform(0, 1, n) * (rng.uniform(size=n) < 0.6)
        b = a @ x0
        c = rng.uniform(0, 2, n)
        ref = linprog(c, A_eq=a, b_eq=b, bounds=[(0, None)] * n, method="highs")
        res = solve_lp(c, a, b)
        assert ref.status == 0
        assert res.objective == pytest.approx(ref.fun, abs=1e-8)
        assert np.abs(a @ res.x - b).max() <= 1e-8
        assert res.duality_gap <= 1e-8 and res.dual_infeasibility <= 1e-8
