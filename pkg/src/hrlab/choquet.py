"""Representing measures and Choquet-boundary membership on finite point sets.

For a finite ``X`` and a function space ``M`` spanned by monomials
``conj(z)^m z^n`` (always containing the constants), a point ``lam`` lies in
the Choquet boundary iff the Dirac mass at ``lam`` is the only probability
measure on ``X`` reproducing every ``f in M`` at ``lam``. That is decided by a
linear program minimizing the mass placed on ``lam``.
"""
from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BetaSumViolation,
    DividesViolation,
    GcdViolation,
    LpInfeasible,
    NotSeparating,
    PairMismatch,
)
from .exponents import ExactPoint, ExponentSet, generates, unit_root
from .lp import solve_lp

BOUNDARY_THRESHOLD = 1e-8
ROW_DROP_EPS = 1e-14


@dataclass(frozen=True)
class AtomicMeasure:
    atoms: tuple  # ((ExactPoint, weight), ...)

    def __post_init__(self) -> None:
        merged: dict[ExactPoint, float] = {}
        for point, weight in self.atoms:
            if weight < 0:
                raise ValueError("atom weights must be nonnegative")
            merged[point] = merged.get(point, 0.0) + weight
        object.__setattr__(self, "atoms", tuple(sorted(merged.items())))

    @property
    def total(self) -> float:
        return math.fsum(w for _, w in self.atoms)

    def weight_at(self, point: ExactPoint) -> float:
        return dict(self.atoms).get(point, 0.0)

    @property
    def points(self) -> list[ExactPoint]:
        return [p for p, _ in self.atoms]

    @property
    def weights(self) -> list[float]:
        return [w for _, w in self.atoms]

    def is_dirac(self, tol: float = BOUNDARY_THRESHOLD) -> bool:
        return sum(1 for w in self.weights if w > tol) <= 1

    def positive_part(self, tol: float = 0.0) -> "AtomicMeasure":
        return AtomicMeasure(tuple((p, w) for p, w in self.atoms if w > tol))


@dataclass(frozen=True)
class MonomialSpace:
    bidegrees: frozenset = field(default_factory=lambda: frozenset({(0, 0)}))

    def __post_init__(self) -> None:
        bidegrees = frozenset((int(m), int(n)) for m, n in self.bidegrees) | {(0, 0)}
        object.__setattr__(self, "bidegrees", bidegrees)

    @classmethod
    def of(cls, *pairs) -> "MonomialSpace":
        return cls(frozenset(pairs))

    def sorted(self) -> list[tuple[int, int]]:
        return sorted(self.bidegrees)

    def nonconstant(self) -> list[tuple[int, int]]:
        return [b for b in self.sorted() if b != (0, 0)]

    def exponent_set(self) -> ExponentSet:
        return ExponentSet(frozenset(self.nonconstant() or [(0, 0)]))

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.bidegrees


def monomial_value(point: ExactPoint, m: int, n: int) -> complex:
    return point.modulus ** (m + n) * unit_root(point.turn * (n - m))


def separates_points(space: MonomialSpace, points: Iterable[ExactPoint]) -> bool:
    return generates(space.exponent_set(), points)


@dataclass(frozen=True)
class BoundaryResult:
    point: ExactPoint
    in_boundary: bool
    weight: float
    witness: AtomicMeasure
    duality_gap: float
    separating: bool


def _moment_rows(points: Sequence[ExactPoint], space: MonomialSpace, target: ExactPoint):
    rows, rhs = [np.ones(len(points))], [1.0]
    for m, n in space.nonconstant():
        vals = np.array([monomial_value(p, m, n) for p in points])
        goal = monomial_value(target, m, n)
        for part, g in ((vals.real, goal.real), (vals.imag, goal.imag)):
            if np.linalg.norm(part) > ROW_DROP_EPS or abs(g) > ROW_DROP_EPS:
                rows.append(part.astype(float))
                rhs.append(float(g))
    return np.array(rows), np.array(rhs)


def boundary_membership(points: Iterable[ExactPoint], space: MonomialSpace, lam: ExactPoint,
                        require_separation: bool = True,
                        threshold: float = BOUNDARY_THRESHOLD) -> BoundaryResult:
    """Minimize the mass at ``lam`` over representing measures of ``lam``.

    ``in_boundary`` is true when the optimum is at least ``1 - threshold``.
    With ``require_separation`` (the default) a space that fails to separate
    the points is rejected, because the boundary then loses its usual meaning;
    pass ``False`` to solve the representing-measure program regardless.
    """
    pts = sorted(set(points))
    if lam not in pts:
        raise ValueError(f"point {lam} is not in X")
    separating = separates_points(space, pts)
    if require_separation and not separating:
        raise NotSeparating("monomial space does not separate the points of X")
    a_eq, b_eq = _moment_rows(pts, space, lam)
    c = np.array([1.0 if p == lam else 0.0 for p in pts])
    res = solve_lp(c, a_eq, b_eq)
    weight = float(res.x[pts.index(lam)])
    residual = float(np.abs(a_eq @ res.x - b_eq).max())
    if residual > 1e-8 * max(1.0, float(np.abs(b_eq).max())):
        raise LpInfeasible(f"representing-measure program solved with residual {residual:.3e}")
    witness = AtomicMeasure(tuple(zip(pts, (float(x) for x in res.x))))
    return BoundaryResult(lam, weight >= 1 - threshold, weight, witness, res.duality_gap, separating)


def boundary_table_csv(results: Sequence[BoundaryResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["modulus", "turn", "optimal_weight", "in_boundary"])
    for r in results:
        writer.writerow([repr(r.point.modulus), str(r.point.turn), repr(r.weight), r.in_boundary])
    return buf.getvalue()


# --- counterexample factory -------------------------------------------------

@dataclass(frozen=True)
class IsnytosParams:
    d: tuple
    pairs: tuple
    beta: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        object.__setattr__(self, "pairs", tuple((int(p), int(q)) for p, q in self.pairs))
        object.__setattr__(self, "beta", tuple(self.beta))

    def validate(self, tol: float = 1e-12) -> None:
        d, pairs, beta = self.d, self.pairs, self.beta
        if len(d) < 2 or len(pairs) != len(d) or len(beta) != len(d):
            raise PairMismatch("need n >= 2 orders with one pair and one beta each")
        if any(x < 1 for x in d):
            raise DividesViolation("orders must be positive")
        for i, di in enumerate(d):
            for j, dj in enumerate(d):
                if i != j and dj % di == 0:
                    raise DividesViolation(f"d[{i}] = {di} divides d[{j}] = {dj}")
        if reduce(math.gcd, d) != 1:
            raise GcdViolation(f"gcd{d} != 1")
        if len(set(pairs)) != len(pairs):
            raise PairMismatch("pairs must be distinct")
        for (p, q), dj in zip(pairs, d):
            if abs(q - p) != dj:
                raise PairMismatch(f"|{q} - {p}| != {dj}")
        if any(not (0 < float(b) < 1) for b in beta):
            raise BetaSumViolation("each beta must lie in (0, 1)")
        if all(isinstance(b, (int, Fraction)) for b in beta):
            ok = sum(Fraction(b) for b in beta) == 1
        else:
            ok = abs(math.fsum(float(b) for b in beta) - 1.0) <= tol
        if not ok:
            raise BetaSumViolation(f"betas sum to {math.fsum(float(b) for b in beta)}, not 1")


@dataclass(frozen=True)
class IsnytosInstance:
    params: IsnytosParams
    radii: tuple
    alphas: tuple
    points: tuple
    measure: AtomicMeasure
    space: MonomialSpace


def isnytos_instance(params: IsnytosParams) -> IsnytosInstance:
    """Point set, representing measure of ``1`` and monomial space of the
    diagonal-free counterexample.

    ``r_j = beta_j^(-1/(p_j+q_j))`` and ``alpha_j = beta_j/d_j``; ``X`` is
    ``{1}`` together with the rotated root sets ``r_j * G_{d_j}``, and ``mu``
    puts mass ``alpha_j`` on each point of the ``j``-th orbit.
    """
    params.validate()
    radii, alphas, atoms = [], [], []
    for dj, (p, q), b in zip(params.d, params.pairs, params.beta):
        r = float(b) ** (-1.0 / (p + q))
        a = float(b) / dj
        radii.append(r)
        alphas.append(a)
        for k in range(dj):
            atoms.append((ExactPoint(r, Fraction(k, dj)), a))
    one = ExactPoint(1.0)
    measure = AtomicMeasure(tuple(atoms))
    points = tuple(sorted({one, *measure.points}))
    return IsnytosInstance(
        params, tuple(radii), tuple(alphas), points, measure, MonomialSpace(frozenset(params.pairs))
    )


def _exact_orbit_sum(residues: Sequence[Fraction]) -> complex:
    """``sum_k exp(2 pi i u_k)`` for rational ``u_k``, exact when the residues
    form equally weighted cosets of a cyclic group (the sum then vanishes)."""
    counts = Counter(u % 1 for u in residues)
    distinct = sorted(counts)
    size = len(distinct)
    if size > 1 and len(set(counts.values())) == 1:
        step = Fraction(1, size)
        if all((distinct[i + 1] - distinct[i]) == step for i in range(size - 1)):
            return 0j
    return sum(c * unit_root(u) for u, c in counts.items())


def measure_moment(measure: AtomicMeasure, m: int, n: int) -> complex:
    """``integral conj(z)^m z^n dmu``; atoms sharing modulus and weight are summed
    as orbits so root-of-unity cancellation is exact."""
    groups: dict[tuple[float, float], list[Fraction]] = {}
    for point, weight in measure.atoms:
        groups.setdefault((point.modulus, weight), []).append(point.turn * (n - m))
    total = 0j
    for (modulus, weight), residues in sorted(groups.items()):
        orbit = _exact_orbit_sum(residues)
        if orbit != 0:
            total += weight * modulus ** (m + n) * orbit
    return total


def verify_representing(measure: AtomicMeasure, space: MonomialSpace, lam: ExactPoint,
                        tol: float = 1e-10) -> bool:
    """``integral f dmu == f(lam)`` for every monomial ``f`` spanning ``space``."""
    for m, n in space.sorted():
        lhs = measure_moment(measure, m, n)
        rhs = monomial_value(lam, m, n)
        if abs(lhs - rhs) > tol * max(1.0, abs(rhs)):
            return False
    return True
