"""Dense two-phase simplex for small equality-form linear programs.

Solves ``min c.x  s.t.  A x = b, x >= 0`` with Bland's rule, so it never
cycles and its pivots are a deterministic function of the input. Problems
here have at most a few dozen variables; clarity wins over speed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LpInfeasible

PIVOT_EPS = 1e-11
FEAS_EPS = 1e-9


@dataclass(frozen=True)
class LpResult:
    x: np.ndarray
    objective: float
    dual: np.ndarray
    duality_gap: float
    dual_infeasibility: float
    iterations: int


def _pivot(tab: np.ndarray, basis: list[int], row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    for i in range(tab.shape[0]):
        if i != row and tab[i, col] != 0.0:
            tab[i] -= tab[i, col] * tab[row]
    basis[row] = col


def _run(tab: np.ndarray, basis: list[int], allowed: np.ndarray, max_iter: int) -> int:
    """Bland's-rule primal simplex on a tableau whose last row is the reduced cost."""
    m = tab.shape[0] - 1
    for it in range(max_iter):
        cost = tab[-1, :-1]
        entering = next((j for j in range(len(cost)) if allowed[j] and cost[j] < -PIVOT_EPS), None)
        if entering is None:
            return it
        col = tab[:m, entering]
        best = None
        for i in range(m):
            if col[i] > PIVOT_EPS:
                ratio = tab[i, -1] / col[i]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise LpInfeasible("linear program is unbounded")
        _pivot(tab, basis, best[1], entering)
    raise LpInfeasible(f"simplex did not terminate in {max_iter} iterations")


def solve_lp(c, a_eq, b_eq, max_iter: int = 10_000) -> LpResult:
    c = np.asarray(c, dtype=float)
    a = np.array(a_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    m, n = a.shape
    neg = b < 0
    a[neg] *= -1
    b[neg] *= -1

    # phase 1: artificial variables n .. n+m-1
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = a
    tab[:m, n:n + m] = np.eye(m)
    tab[:m, -1] = b
    tab[-1, :n] = -a.sum(axis=0)
    tab[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    allowed = np.ones(n + m, dtype=bool)
    iters = _run(tab, basis, allowed, max_iter)
    if -tab[-1, -1] > FEAS_EPS * max(1.0, float(np.abs(b).max(initial=0.0))):
        raise LpInfeasible(f"phase 1 ended with infeasibility {-tab[-1, -1]:.3e}")

    # drive artificials out of the basis; rows where that is impossible are redundant
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if abs(tab[i, j]) > PIVOT_EPS), None)
            if col is None:
                continue
            _pivot(tab, basis, i, col)
        keep.append(i)
    rows = keep
    tab = np.vstack([tab[rows], np.zeros((1, tab.shape[1]))])
    basis = [basis[i] for i in rows]
    tab = np.delete(tab, np.s_[n:n + m], axis=1)

    # phase 2
    tab[-1, :n] = c
    tab[-1, -1] = 0.0
    for i, j in enumerate(basis):
        if tab[-1, j] != 0.0:
            tab[-1] -= tab[-1, j] * tab[i]
    iters += _run(tab, basis, np.ones(n, dtype=bool), max_iter)

    x = np.zeros(n)
    for i, j in enumerate(basis):
        x[j] = tab[i, -1]
    x = np.clip(x, 0.0, None)
    objective = float(c @ x)

    # dual from the final basis: y solves B^T y = c_B on the kept rows
    a_rows = a[rows]
    b_rows = b[rows]
    bmat = a_rows[:, basis]
    y_rows = np.linalg.lstsq(bmat.T, c[basis], rcond=None)[0]
    y = np.zeros(m)
    y[rows] = y_rows
    y[neg] *= -1
    reduced = c - a_rows.T @ y_rows
    dual_infeas = float(max(0.0, -reduced.min(initial=0.0)))
    gap = abs(objective - float(b_rows @ y_rows))
    return LpResult(x, objective, y, gap, dual_infeas, iters)
