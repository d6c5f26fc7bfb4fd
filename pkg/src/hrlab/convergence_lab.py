"""Weak versus strong convergence with truncated-shift sequences.

The sequence is ``T_n = V^n N V*^n + lam (I - V^n V*^n)`` on ``K = H + tail``,
where ``V`` is the identity on ``H`` and the unilateral shift on the tail.
The shift is truncated to ``tail_dim`` coordinates. ``V*`` is exact under
truncation (it only moves mass down), so pairings ``<f(T_n) u, v>`` with
probes of low tail degree coincide with the infinite-dimensional values.
Functional calculus for ``T_n`` is evaluated on the compression of ``N`` to
the coordinates that survive ``n`` shifts; the norm of the block coupling
them to the discarded coordinates is recorded as ``boundary_norm`` and is
exactly zero when the tail of ``N`` is scalar there (the default layout).

Search budgets, the non-spectrality margin and the falsifier floor below are
calibration constants. They gate tests; they are not mathematical claims.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .choquet import AtomicMeasure, MonomialSpace, boundary_membership
from .errors import BoundaryPoint, IndexOverflow, ProbeUnsafe, RegimeError
from .exponents import ExactPoint, ExponentSet
from .matrix_core import (
    NormalOperator,
    adjoint,
    func_calc,
    monomial,
    opnorm,
    spectral_decompose,
)
from .povm import (
    Povm,
    idempotence_defect,
    moment_operator,
    naimark_dilate,
    project_to_povm,
    spectral_measure_of,
)
from .tolerance import ToleranceConfig, default_tol

WEAK_TOL = 1e-12
FALSIFIER_FLOOR = 1e-6
NONSPECTRAL_MARGIN = 0.1
SEARCH_BUDGET = 10_000
EXACT_MATCH = 1e-24


# --- functions --------------------------------------------------------------

@dataclass(frozen=True)
class LabeledFunction:
    label: str
    fn: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    bidegree: Optional[tuple[int, int]] = None


def _power_label(sym: str, k: int) -> str:
    return "" if k == 0 else sym if k == 1 else f"{sym}^{k}"


def monomial_label(m: int, n: int) -> str:
    parts = [p for p in (_power_label("zbar", m), _power_label("z", n)) if p]
    return " ".join(parts) or "1"


def monomial_function(m: int, n: int) -> LabeledFunction:
    return LabeledFunction(monomial_label(m, n), lambda z, m=m, n=n: np.conj(z) ** m * z**n, (m, n))


def monomial_dictionary(max_total: int = 3) -> list[LabeledFunction]:
    return [
        monomial_function(m, n)
        for total in range(max_total + 1)
        for m in range(total + 1)
        for n in [total - m]
    ]


# --- sequence ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SequenceConfig:
    """``N`` acts on ``K``; ``H`` is spanned by the first ``h_dim`` coordinates.

    ``target`` is the operator ``T`` on ``H`` the sequence is compared with
    (through ``T ⊕ lam I``); it defaults to the compression of ``N`` to ``H``.
    """

    normal: NormalOperator
    h_dim: int
    tail_dim: int
    lam: complex
    n_max: int
    max_probe_degree: int = 3
    target: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.normal.dim != self.h_dim + self.tail_dim:
            raise ValueError("dim K must equal h_dim + tail_dim")
        if self.h_dim < 1 or self.n_max < 0 or self.max_probe_degree < 0:
            raise ValueError("h_dim >= 1, n_max >= 0 and max_probe_degree >= 0 required")
        if self.tail_dim < self.n_max + self.max_probe_degree + 1:
            raise ProbeUnsafe(
                f"tail_dim {self.tail_dim} < n_max + max_probe_degree + 1 = "
                f"{self.n_max + self.max_probe_degree + 1}"
            )
        target = self.target
        if target is None:
            target = self.normal.matrix[: self.h_dim, : self.h_dim]
        target = np.array(target, dtype=complex).reshape(self.h_dim, self.h_dim)
        spectral_decompose(target)  # the comparison operator must be normal
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "lam", complex(self.lam))

    @property
    def k_dim(self) -> int:
        return self.h_dim + self.tail_dim

    def comparison(self) -> np.ndarray:
        """``T ⊕ lam I`` on ``K``."""
        out = np.zeros((self.k_dim, self.k_dim), dtype=complex)
        out[: self.h_dim, : self.h_dim] = self.target
        out[self.h_dim:, self.h_dim:] = self.lam * np.eye(self.tail_dim)
        return out

    def projection_h(self) -> np.ndarray:
        p = np.zeros((self.k_dim, self.k_dim))
        p[: self.h_dim, : self.h_dim] = np.eye(self.h_dim)
        return p


def shift_power(cfg: SequenceConfig, n: int) -> np.ndarray:
    """``V^n``: identity on ``H``, truncated shift ``e_k -> e_{k+n}`` on the tail."""
    v = np.zeros((cfg.k_dim, cfg.k_dim))
    v[: cfg.h_dim, : cfg.h_dim] = np.eye(cfg.h_dim)
    for k in range(cfg.tail_dim - n):
        v[cfg.h_dim + k + n, cfg.h_dim + k] = 1.0
    return v


def build_sequence(cfg: SequenceConfig, n: int) -> np.ndarray:
    if n < 0 or n > cfg.n_max:
        raise IndexOverflow(f"index {n} outside 0..{cfg.n_max}")
    v = shift_power(cfg, n)
    range_proj = v @ v.T
    return v @ cfg.normal.matrix @ v.T + cfg.lam * (np.eye(cfg.k_dim) - range_proj)


def _surviving(cfg: SequenceConfig, n: int) -> np.ndarray:
    return np.arange(cfg.h_dim + cfg.tail_dim - n)


def boundary_norm(cfg: SequenceConfig, n: int) -> float:
    keep = _surviving(cfg, n)
    drop = np.arange(len(keep), cfg.k_dim)
    if drop.size == 0:
        return 0.0
    return opnorm(cfg.normal.matrix[np.ix_(drop, keep)])


def apply_function(cfg: SequenceConfig, f: Callable, n: int,
                   tol: ToleranceConfig | None = None) -> np.ndarray:
    """``f(T_n) = V^n f(C_n) V*^n + f(lam)(I - V^n V*^n)`` with ``C_n`` the
    compression of ``N`` to the surviving coordinates."""
    if n < 0 or n > cfg.n_max:
        raise IndexOverflow(f"index {n} outside 0..{cfg.n_max}")
    keep = _surviving(cfg, n)
    block = cfg.normal.matrix[np.ix_(keep, keep)]
    f_block = func_calc(spectral_decompose(block, tol), f)
    embedded = np.zeros((cfg.k_dim, cfg.k_dim), dtype=complex)
    embedded[np.ix_(keep, keep)] = f_block
    v = shift_power(cfg, n)
    f_lam = complex(np.asarray(f(np.array([cfg.lam])))[0])
    return v @ embedded @ v.T + f_lam * (np.eye(cfg.k_dim) - v @ v.T)


def weak_limit(cfg: SequenceConfig, f: Callable) -> np.ndarray:
    """``P f(N) P + f(lam)(I - P)``."""
    p = cfg.projection_h()
    f_lam = complex(np.asarray(f(np.array([cfg.lam])))[0])
    return p @ func_calc(cfg.normal, f) @ p + f_lam * (np.eye(cfg.k_dim) - p)


def apply_comparison(cfg: SequenceConfig, f: Callable, tol: ToleranceConfig | None = None) -> np.ndarray:
    t = spectral_decompose(cfg.target, tol)
    out = np.zeros((cfg.k_dim, cfg.k_dim), dtype=complex)
    out[: cfg.h_dim, : cfg.h_dim] = func_calc(t, f)
    f_lam = complex(np.asarray(f(np.array([cfg.lam])))[0])
    out[cfg.h_dim:, cfg.h_dim:] = f_lam * np.eye(cfg.tail_dim)
    return out


# --- probes -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Probe:
    vector: np.ndarray
    degree: int
    label: str = ""


def probe_degree(cfg: SequenceConfig, u: np.ndarray) -> int:
    """One more than the largest tail index carrying mass; 0 for vectors in ``H``."""
    tail = np.nonzero(np.abs(u[cfg.h_dim:]) > 0)[0]
    return int(tail.max()) + 1 if tail.size else 0


def make_probe(cfg: SequenceConfig, vector, label: str = "") -> Probe:
    u = np.array(vector, dtype=complex)
    u = u / np.linalg.norm(u)
    deg = probe_degree(cfg, u)
    if deg > cfg.max_probe_degree or deg >= cfg.tail_dim - cfg.n_max:
        raise ProbeUnsafe(f"probe degree {deg} is not edge-safe for this configuration")
    return Probe(u, deg, label)


def default_probes(cfg: SequenceConfig, count: int = 12, seed: int = 0) -> list[Probe]:
    """Deterministic probe family: ``H`` basis vectors, low tail basis vectors,
    mixed vectors and seeded random vectors of bounded degree."""
    k, h, deg = cfg.k_dim, cfg.h_dim, cfg.max_probe_degree
    probes = []
    for i in range(min(h, 4)):
        e = np.zeros(k)
        e[i] = 1
        probes.append(make_probe(cfg, e, f"h{i}"))
    for t in range(min(deg, 3)):
        e = np.zeros(k)
        e[h + t] = 1
        probes.append(make_probe(cfg, e, f"tail{t}"))
    if deg >= 1:
        for t in range(min(deg, 2)):
            e = np.zeros(k, dtype=complex)
            e[0] = 1
            e[h + t] = 1j if t else 1
            probes.append(make_probe(cfg, e, f"mix{t}"))
    rng = np.random.default_rng(seed)
    i = 0
    while len(probes) < count:
        u = np.zeros(k, dtype=complex)
        width = h + deg
        u[:width] = rng.normal(size=width) + 1j * rng.normal(size=width)
        probes.append(make_probe(cfg, u, f"rand{i}"))
        i += 1
    return probes[:count]


# --- reports ----------------------------------------------------------------

@dataclass(frozen=True)
class GapRow:
    label: str
    n: int
    weak_gap: float
    strong_gap: float
    stationarity: float
    wphnw_residual: float


@dataclass
class ConvergenceReport:
    rows: list[GapRow]
    stable_from: int
    boundary_norm: float
    wphnw_max: float
    sup_norm: float
    comparison_norm: float
    wydnu_ok: bool
    flags: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def by_label(self, label: str) -> list[GapRow]:
        return [r for r in self.rows if r.label == label]

    def stable_rows(self, label: str) -> list[GapRow]:
        return [r for r in self.by_label(label) if r.n >= self.stable_from]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["f", "n", "weakGap", "strongGap"])
        for r in self.rows:
            writer.writerow([r.label, r.n, repr(r.weak_gap), repr(r.strong_gap)])
        return buf.getvalue()


def _pair_scale(a: np.ndarray) -> float:
    return max(1.0, opnorm(a))


def convergence_gaps(cfg: SequenceConfig, functions: Sequence[LabeledFunction],
                     probes: Optional[Sequence[Probe]] = None, ns: Optional[Sequence[int]] = None,
                     tol: ToleranceConfig | None = None) -> ConvergenceReport:
    """Weak and strong gaps of ``f(T_n)`` against ``f(T ⊕ lam I)`` on a probe family.

    ``stationarity`` is the largest deviation of ``<f(T_n) u, v>`` from the
    weak-limit pairing over probe pairs with ``max(deg u, deg v) <= n``.
    ``wphnw_residual`` checks the expansion of ``||A_n h - A h||^2`` through
    ``A_n* A_n``, ``A_n`` and ``A* A`` for every probe ``h``.
    """
    tol = tol or default_tol()
    probes = list(probes) if probes is not None else default_probes(cfg)
    for pr in probes:
        if pr.degree > cfg.max_probe_degree or pr.degree >= cfg.tail_dim - cfg.n_max:
            raise ProbeUnsafe(f"probe {pr.label!r} of degree {pr.degree} is not edge-safe")
    ns = list(ns) if ns is not None else list(range(cfg.n_max + 1))
    u = np.array([p.vector for p in probes]).T  # columns
    degs = np.array([p.degree for p in probes])
    pair_deg = np.maximum.outer(degs, degs)
    rows = []
    wphnw_max = 0.0
    for f in functions:
        target = apply_comparison(cfg, f.fn, tol)
        limit = weak_limit(cfg, f.fn)
        limit_pair = adjoint(u) @ limit @ u
        for n in ns:
            fn_n = apply_function(cfg, f.fn, n, tol)
            diff = fn_n - target
            pairings = adjoint(u) @ diff @ u  # [v, u] -> <diff u, v>
            weak = float(np.abs(pairings).max())
            vecs = diff @ u
            strong = float(np.linalg.norm(vecs, axis=0).max())
            mask = pair_deg <= n
            stat = float(np.abs((adjoint(u) @ fn_n @ u - limit_pair)[mask]).max(initial=0.0))
            lhs = np.linalg.norm(vecs, axis=0) ** 2
            rhs = (
                np.einsum("ij,ij->j", u.conj(), adjoint(fn_n) @ fn_n @ u).real
                - 2 * np.einsum("ij,ij->j", (target @ u).conj(), fn_n @ u).real
                + np.einsum("ij,ij->j", u.conj(), adjoint(target) @ target @ u).real
            )
            resid = float(np.abs(lhs - rhs).max())
            wphnw_max = max(wphnw_max, resid)
            rows.append(GapRow(f.label, n, weak, strong, stat, resid))
    seq_norms = [opnorm(build_sequence(cfg, n)) for n in range(1, cfg.n_max + 1)]
    sup_norm = max(seq_norms, default=opnorm(cfg.normal.matrix))
    comp = cfg.comparison()
    comp_norm = opnorm(comp)
    eig_radius = float(np.abs(np.linalg.eigvals(comp)).max())
    bound = tol.bound(sup_norm)
    wydnu_ok = comp_norm <= sup_norm + bound and eig_radius <= sup_norm + bound
    bnorm = max(boundary_norm(cfg, n) for n in ns)
    return ConvergenceReport(rows, int(degs.max(initial=0)), bnorm, wphnw_max, sup_norm, comp_norm, wydnu_ok)


# --- the non-hyperrigidity pipeline -----------------------------------------

DEFAULT_GENERATORS = (monomial_function(0, 1), monomial_function(1, 1))


def _complete_basis(v: np.ndarray) -> np.ndarray:
    """Unitary whose first columns are the orthonormal columns of ``v``."""
    q, _ = np.linalg.qr(v, mode="complete")
    return np.hstack([v, q[:, v.shape[1]:]])


def main2_experiment(points: Sequence[ExactPoint], space: MonomialSpace, lambda0: ExactPoint,
                     lam: Optional[ExactPoint] = None, h_dim: int = 1, n_max: int = 6,
                     padding: Optional[int] = None, max_probe_degree: int = 3,
                     generators: Sequence[LabeledFunction] = DEFAULT_GENERATORS,
                     dictionary: Optional[Sequence[LabeledFunction]] = None,
                     require_separation: bool = True,
                     tol: ToleranceConfig | None = None) -> ConvergenceReport:
    """Build the weakly-but-not-strongly convergent sequence for a point off
    the boundary and report the four properties it exhibits.

    ``T = lambda0 I_H``; the representing measure ``mu != delta`` from the
    boundary program gives ``F = mu(.) I_H``, its minimal Naimark dilation
    gives ``N`` on ``H + complement``, and a scalar padding block (eigenvalue
    ``lam``) makes room for the shift.
    """
    tol = tol or default_tol()
    pts = sorted(set(points))
    lam = lam if lam is not None else lambda0
    if lam not in pts:
        raise ValueError("lam must be a point of X")
    br = boundary_membership(pts, space, lambda0, require_separation=require_separation)
    if br.in_boundary:
        raise BoundaryPoint(f"{lambda0} lies in the Choquet boundary; no representing measure besides the Dirac mass")
    mu = br.witness.positive_part(1e-12)
    weights = np.array(mu.weights)
    weights = weights / weights.sum()
    povm = Povm.scalar([p.to_complex() for p in mu.points], weights, h_dim, tol)
    dil = naimark_dilate(povm, minimal=True, tol=tol)
    w = _complete_basis(dil.isometry)
    n_dil = adjoint(w) @ dil.normal.matrix @ w
    complement = dil.big_dim - h_dim
    pad = padding if padding is not None else n_max + max_probe_degree + 1
    tail_dim = complement + pad
    k_dim = h_dim + tail_dim
    lam_c = lam.to_complex()
    big = np.zeros((k_dim, k_dim), dtype=complex)
    big[: dil.big_dim, : dil.big_dim] = n_dil
    big[dil.big_dim:, dil.big_dim:] = lam_c * np.eye(pad)
    normal = spectral_decompose(big, tol)
    target = lambda0.to_complex() * np.eye(h_dim)
    cfg = SequenceConfig(normal, h_dim, tail_dim, lam_c, n_max, max_probe_degree, target)

    dictionary = list(dictionary) if dictionary is not None else monomial_dictionary(3)
    in_space = [monomial_function(m, n) for m, n in space.sorted()]
    functions = {f.label: f for f in [*dictionary, *in_space, *generators]}
    report = convergence_gaps(cfg, list(functions.values()), tol=tol)
    stable = report.stable_from

    def stable_max(label: str, attr: str) -> float:
        return max(getattr(r, attr) for r in report.stable_rows(label))

    # (iv): first generator whose compression differs from its value at T
    p_h = dil.isometry
    mismatches = {}
    f0 = None
    for g in generators:
        compressed = adjoint(p_h) @ func_calc(dil.normal, g.fn) @ p_h
        at_t = func_calc(spectral_decompose(target, tol), g.fn)
        mismatches[g.label] = opnorm(compressed - at_t)
        if f0 is None and mismatches[g.label] > tol.bound(opnorm(at_t)):
            f0 = g
    f0_in_space = f0 is not None and f0.bidegree is not None and f0.bidegree in space
    xi = monomial_label(0, 1)
    xi_strong = [r.strong_gap for r in report.stable_rows(xi)]
    strong_floor = min(xi_strong) if xi_strong else 0.0
    stationarity = max(r.stationarity for r in report.rows)
    space_weak = max(stable_max(f.label, "weak_gap") for f in in_space)
    scale = max(_pair_scale(func_calc(normal, f.fn)) for f in functions.values())

    report.flags = {
        "i_not_strongly_convergent": bool(strong_floor > tol.bound(1.0)),
        "ii_weakly_convergent": bool(stationarity <= WEAK_TOL * scale),
        "iii_weak_limit_on_space": bool(space_weak <= WEAK_TOL * scale),
        "iv_generator_mismatch": bool(f0 is not None and not f0_in_space),
    }
    report.details = {
        "lambda0": lambda0,
        "lam": lam,
        "witness": mu,
        "commutator_pn": opnorm(dil.projection_p @ dil.normal.matrix - dil.normal.matrix @ dil.projection_p),
        "dilation_dim": dil.big_dim,
        "tail_dim": tail_dim,
        "strong_floor_xi": strong_floor,
        "strong_lower_bound_xi": mismatches.get(xi, opnorm(adjoint(p_h) @ dil.normal.matrix @ p_h - target)),
        "max_stationarity": stationarity,
        "max_weak_gap_on_space": space_weak,
        "f0": f0.label if f0 else None,
        "f0_mismatch": mismatches.get(f0.label) if f0 else 0.0,
        "generator_mismatches": mismatches,
        "separating": br.separating,
    }
    return report


# --- moment-matching searches -----------------------------------------------

_OFFSETS = [Fraction(s * k, 1) for k in (1, 2, 3) for s in (-1, 1)] + [
    Fraction(s * k, 2) for k in (1, 3, 5) for s in (-1, 1)
] + [Fraction(s * k, 4) for k in (1, 3, 5, 7) for s in (-1, 1)]


def scalar_moment_residual(measure: AtomicMeasure, p: int, q: int, r: int, t: float) -> float:
    xs = [pt.to_complex().real for pt in measure.points]
    ws = measure.weights
    res = abs(math.fsum(ws) - 1)
    for e in {p + q, 2 * r}:
        res = max(res, abs(math.fsum(w * x**e for x, w in zip(xs, ws)) - t**e))
    return res


def _family_weights(atoms: Sequence[float], exps: Sequence[int], t: float) -> Optional[np.ndarray]:
    mat = np.array([[1.0] * len(atoms)] + [[x**e for x in atoms] for e in exps])
    rhs = np.array([1.0] + [t**e for e in exps])
    if mat.shape[0] == mat.shape[1]:
        if abs(np.linalg.det(mat)) < 1e-12:
            return None
        return np.linalg.solve(mat, rhs)
    wts = np.linalg.lstsq(mat, rhs, rcond=None)[0]
    return wts if np.abs(mat @ wts - rhs).max() <= 1e-12 * max(1.0, float(np.abs(rhs).max())) else None


def scalar_counterexample_search(p: int, q: int, r: int, t: float, budget: int = 5000) -> Optional[AtomicMeasure]:
    """A non-Dirac probability measure on the line with the two moments of ``t``.

    Only defined when ``2r <= p + q``; the moment identities force a Dirac
    measure otherwise. Atoms are drawn from ``t`` plus a fixed offset list
    (then ``t`` and ``-t`` themselves). Square moment systems on
    ``1 + #exponents`` atoms are tried first, then two-atom families solved
    in the least-squares sense. ``None`` means the budget ran out, which
    also happens when no such measure exists (e.g. ``t = 0`` with an even
    nonzero exponent).
    """
    if p + q < 2 * r:
        raise RegimeError(f"p + q = {p + q} < 2r = {2 * r}: matching moments force a spectral measure")
    t = float(t)
    exps = sorted({p + q, 2 * r} - {0})
    cands = list(dict.fromkeys([t + float(o) for o in _OFFSETS] + [t, -t]))
    families = itertools.chain(
        itertools.combinations(cands, len(exps) + 1), itertools.combinations(cands, 2)
    )
    for combo in itertools.islice(families, budget):
        wts = _family_weights(combo, exps, t)
        if wts is None or wts.min() < -1e-14 or np.count_nonzero(wts > 1e-12) < 2:
            continue
        wts = np.clip(wts, 0.0, None)
        measure = AtomicMeasure(tuple((ExactPoint.from_real(x), float(w)) for x, w in zip(combo, wts) if w > 0))
        if scalar_moment_residual(measure, p, q, r, t) <= 1e-12 * max(1.0, abs(t)) ** (p + q):
            return measure
    return None


@dataclass(frozen=True, eq=False)
class SearchResult:
    best_residual: float
    witness: Optional[Povm]
    best_defect: float
    steps: int


def moment_mismatch(f: Povm, t: np.ndarray, xi: ExponentSet) -> float:
    """``sum over xi of ||moment(F, m, n) - T*^m T^n||_F^2``."""
    return float(sum(np.linalg.norm(moment_operator(f, m, n) - monomial(t, m, n)) ** 2 for m, n in xi))


def povm_perturbation_search(t: NormalOperator, xi: ExponentSet, budget: int = SEARCH_BUDGET,
                             seed: int = 0, seed_measure: Optional[AtomicMeasure] = None,
                             margin: float = NONSPECTRAL_MARGIN, restarts: int = 8) -> SearchResult:
    """Randomized local search for a non-spectral POVM matching the moments in ``xi``.

    Candidates count as non-spectral when some effect is at least ``margin``
    away from idempotent. The objective is the moment mismatch plus a penalty
    for falling below the margin. A witness is returned only if the best
    non-spectral mismatch is at most :data:`FALSIFIER_FLOOR`.
    """
    rng = np.random.default_rng(seed)
    dim = t.dim
    if seed_measure is not None:
        support = np.array([p.to_complex() for p in seed_measure.points])
    else:
        support = np.array(spectral_measure_of(t).support)
    k = len(support)
    coeffs = np.array([np.conj(support) ** m * support**n for m, n in xi])
    targets = np.array([monomial(t.matrix, m, n) for m, n in xi])
    eye = np.eye(dim)

    def mismatch(eff: np.ndarray) -> float:
        mom = np.einsum("aj,jxy->axy", coeffs, eff)
        return float(np.sum(np.abs(mom - targets) ** 2))

    def defect(eff: np.ndarray) -> float:
        sq = eff @ eff - eff
        return float(np.linalg.norm(sq, ord=2, axis=(1, 2)).max())

    def objective(eff: np.ndarray) -> tuple[float, float, float]:
        res, dfc = mismatch(eff), defect(eff)
        return res + 10.0 * max(0.0, margin - dfc) ** 2, res, dfc

    def project(eff: np.ndarray) -> np.ndarray:
        return np.array(project_to_povm(list(eff)))

    def random_povm() -> np.ndarray:
        g = rng.normal(size=(k, dim, dim)) + 1j * rng.normal(size=(k, dim, dim))
        return project(g @ np.conj(np.transpose(g, (0, 2, 1))))

    starts = []
    if seed_measure is not None:
        starts.append(np.array([w * eye for w in seed_measure.weights], dtype=complex))
    else:
        spec = spectral_measure_of(t)
        starts.append(np.array(spec.effects))
    best_res, best_eff, best_def = math.inf, None, 0.0
    steps = 0
    per_start = max(1, budget // max(1, restarts))
    start_idx = 0
    while steps < budget:
        eff = starts[start_idx] if start_idx < len(starts) else random_povm()
        start_idx += 1
        score, res, dfc = objective(eff)
        if dfc >= margin and res < best_res:
            best_res, best_eff, best_def = res, eff, dfc
        sigma = 0.1
        for _ in range(per_start):
            if steps >= budget or best_res <= EXACT_MATCH:
                break
            steps += 1
            g = rng.normal(size=(k, dim, dim)) + 1j * rng.normal(size=(k, dim, dim))
            g = (g + np.conj(np.transpose(g, (0, 2, 1)))) / 2
            cand = project(eff + sigma * g)
            c_score, c_res, c_def = objective(cand)
            if c_score < score:
                eff, score = cand, c_score
                sigma = min(1.0, sigma * 1.5)
            else:
                sigma = max(1e-7, sigma * 0.9)
            if c_def >= margin and c_res < best_res:
                best_res, best_eff, best_def = c_res, cand, c_def
        if best_res <= EXACT_MATCH:
            break
    witness = None
    if best_eff is not None and best_res <= FALSIFIER_FLOOR:
        witness = Povm(tuple(support), tuple(best_eff), ToleranceConfig(1e-8, 1e-8))
    return SearchResult(best_res, witness, best_def, steps)
