"""Matrix inequality and projection-commutation checkers.

Covers the power-function Jensen-type operator inequality ``T* A^s T <= (T* A T)^s``
for contractions, the Schwarz-type inequality for ``Phi(X) = R* X R``, the
equivalences between commutation of a projection with an operator and
relations between compressions, and the moment-compression theorem giving
commutation of ``P`` with ``N^d``.

Equality is detected at :data:`EQUALITY_TOL`, inequalities at
:data:`INEQUALITY_TOL`; the two are kept apart so instances sitting on the
equality manifold do not flap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import NotContraction, NotProjection, NotPsd, ShapeMismatch, SigmaViolation
from .exponents import ExponentSet, gcd_diffs, sigma_condition
from .matrix_core import (
    NormalOperator,
    adjoint,
    as_matrix,
    check_orthonormal,
    compression_moment,
    kernel_projection,
    monomial,
    opnorm,
    polar_unitary,
    psd_gap,
    psd_power,
    random_unitary,
    spectral_decompose,
)
from .tolerance import ToleranceConfig, default_tol

EQUALITY_TOL = 1e-10
INEQUALITY_TOL = 1e-9


def _herm(a: np.ndarray) -> np.ndarray:
    return (a + adjoint(a)) / 2


# --- power inequality -------------------------------------------------------

@dataclass(frozen=True)
class HansenResult:
    gap: float
    equality: bool
    commutator: float
    difference: float


def hansen_check(a, t, s: float, tol: ToleranceConfig | None = None) -> HansenResult:
    """Compare ``T* f(A) T`` with ``f(T* A T)`` for ``f(x) = x^s``, ``0 < s < 1``.

    ``gap`` is the smallest eigenvalue of ``f(T*AT) - T* f(A) T`` and must be
    nonnegative up to tolerance; ``equality`` reports whether the two sides
    coincide; ``commutator`` is ``||TA - AT||``.
    """
    tol = tol or default_tol()
    a, t = as_matrix(a), as_matrix(t)
    if a.shape != t.shape or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"A {a.shape} and T {t.shape} must be square of one size")
    if not 0 < s < 1:
        raise ValueError("exponent s must lie in (0, 1)")
    if opnorm(t) > 1 + tol.bound(1.0):
        raise NotContraction(f"||T|| = {opnorm(t):.6g} > 1")
    if opnorm(a - adjoint(a)) > tol.bound(opnorm(a)) or psd_gap(_herm(a), tol) < -tol.bound(opnorm(a)):
        raise NotPsd("A must be positive semidefinite")
    a = _herm(a)
    lhs = adjoint(t) @ psd_power(a, s, tol) @ t
    rhs = psd_power(_herm(adjoint(t) @ a @ t), s, tol)
    diff = _herm(rhs - lhs)
    scale = max(1.0, opnorm(a)) ** s
    difference = opnorm(diff)
    return HansenResult(
        gap=psd_gap(diff, tol),
        equality=difference <= EQUALITY_TOL * scale,
        commutator=opnorm(t @ a - a @ t),
        difference=difference,
    )


# --- Schwarz inequality -----------------------------------------------------

@dataclass(frozen=True)
class LiebRuskaiResult:
    gaps: tuple
    monotone: bool
    forms: tuple  # per eps: quadratic forms of the subtracted term at the test vectors


def probe_vectors(dim: int, count: int = 8) -> np.ndarray:
    """Fixed unit test vectors (columns): basis vectors first, then seeded random ones."""
    rng = np.random.default_rng(8128 + dim)
    cols = [np.eye(dim)[:, i] for i in range(min(dim, count))]
    while len(cols) < count:
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        cols.append(v / np.linalg.norm(v))
    return np.array(cols, dtype=complex).T


def lieb_ruskai_check(r, a, b, eps_schedule: Sequence[float] = (1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6),
                      tol: ToleranceConfig | None = None) -> LiebRuskaiResult:
    """``Phi(A*A) - Phi(A*B)(Phi(B*B) + eps)^{-1} Phi(B*A) >= 0`` with ``Phi(X) = R* X R``.

    ``A`` and ``B`` share a shape ``(p, q)``; ``R`` is ``(q, s)``. ``monotone``
    says the subtracted quadratic form is nondecreasing as ``eps`` decreases,
    at :func:`probe_vectors`.
    """
    tol = tol or default_tol()
    r, a, b = (np.atleast_2d(np.asarray(x, dtype=complex)) for x in (r, a, b))
    if a.shape != b.shape or r.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"incompatible shapes R {r.shape}, A {a.shape}, B {b.shape}")
    eps = [float(e) for e in eps_schedule]
    if not eps or any(e <= 0 for e in eps) or any(x <= y for x, y in zip(eps, eps[1:])):
        raise ValueError("eps schedule must be positive and strictly decreasing")

    def phi(x):
        return adjoint(r) @ x @ r

    paa, pab, pbb = _herm(phi(adjoint(a) @ a)), phi(adjoint(a) @ b), _herm(phi(adjoint(b) @ b))
    dim = r.shape[1]
    vecs = probe_vectors(dim)
    scale = max(1.0, opnorm(paa))
    gaps, forms = [], []
    for e in eps:
        sub = _herm(pab @ np.linalg.solve(pbb + e * np.eye(dim), adjoint(pab)))
        gaps.append(psd_gap(_herm(paa - sub), tol))
        forms.append(tuple(np.einsum("ij,ij->j", vecs.conj(), sub @ vecs).real))
    monotone = all(
        y >= x - INEQUALITY_TOL * scale
        for prev, cur in zip(forms, forms[1:])
        for x, y in zip(prev, cur)
    )
    return LiebRuskaiResult(tuple(gaps), monotone, tuple(forms))


# --- projection commutation -------------------------------------------------

@dataclass
class CommutationVerdict:
    """Per-condition residuals and booleans (``residual <= threshold``)."""

    residuals: dict = field(default_factory=dict)
    holds: dict = field(default_factory=dict)
    applicable: dict = field(default_factory=dict)
    status: Optional[str] = None
    disagreements: list = field(default_factory=list)

    def record(self, label: str, residual: float, threshold: float, applicable: bool = True) -> None:
        self.residuals[label] = float(residual)
        self.holds[label] = bool(residual <= threshold)
        self.applicable[label] = bool(applicable)

    def check_agreement(self, group: str, labels: Sequence[str]) -> None:
        values = {lab: self.holds[lab] for lab in labels if self.applicable.get(lab)}
        if len(set(values.values())) > 1:
            self.disagreements.append({"group": group, "values": values})

    @property
    def consistent(self) -> bool:
        return not self.disagreements

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "residuals": dict(sorted(self.residuals.items())),
            "holds": dict(sorted(self.holds.items())),
            "applicable": dict(sorted(self.applicable.items())),
            "disagreements": self.disagreements,
        }


def check_projection(p, tol: ToleranceConfig | None = None) -> np.ndarray:
    tol = tol or default_tol()
    p = as_matrix(p)
    if p.shape[0] != p.shape[1]:
        raise NotProjection("projection must be square")
    if opnorm(p - adjoint(p)) > tol.bound(1.0) or opnorm(p @ p - p) > tol.bound(1.0):
        raise NotProjection("P must be Hermitian and idempotent")
    return _herm(p)


def _is_normal(a: np.ndarray, tol: ToleranceConfig) -> bool:
    return opnorm(a @ adjoint(a) - adjoint(a) @ a) <= tol.bound(opnorm(a) ** 2)


def _compressed(t: np.ndarray, p: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    """``PTP`` restricted to ``ran P`` in an orthonormal basis of the range."""
    w, q = np.linalg.eigh(p)
    basis = q[:, w > 0.5]
    return adjoint(basis) @ t @ basis


def _power_of_unitary(u: np.ndarray, k: int) -> np.ndarray:
    return np.linalg.matrix_power(u if k >= 0 else adjoint(u), abs(k))


NPQ_FAMILY_DEPTH = 3


def projection_commutation_check(t, p, pq: Optional[tuple[int, int]] = None,
                                 tol: ToleranceConfig | None = None) -> CommutationVerdict:
    """Evaluate the equivalent commutation conditions for ``T`` and ``P``.

    Conditions labelled ``rudec.*`` relate ``PT = TP`` to compressions of
    ``T``: (i) both compression identities, (ii) ``PT = TP``, (iii) ``ran P``
    reduces ``T``, (iv) the first compression identity alone (meaningful only
    when ``T`` and ``PTP|ran P`` are normal). With ``pq`` and normal ``T`` the
    ``npq.*`` conditions are added: (i) ``P`` commutes with ``T*^p T^q``,
    (ii) with ``|T|`` and ``U^(q-p)``, and for ``p != q`` (iii) with every
    ``T*^a T^b`` with ``|b - a| = |q - p|`` and ``a <= 3``, (iv) with
    ``T^|q-p|``. Disagreements inside a group are recorded.
    """
    tol = tol or default_tol()
    t = as_matrix(t)
    p = check_projection(p, tol)
    if t.shape != p.shape:
        raise ShapeMismatch(f"T {t.shape} and P {p.shape} differ in shape")
    verdict = CommutationVerdict()
    lin = tol.bound(max(1.0, opnorm(t)))
    quad = tol.bound(max(1.0, opnorm(t)) ** 2)
    ts = adjoint(t)
    ptp, ptsp = p @ t @ p, p @ ts @ p
    first = opnorm(ptsp @ ptp - p @ ts @ t @ p)
    second = opnorm(ptp @ ptsp - p @ t @ ts @ p)
    comp = np.eye(len(p)) - p
    verdict.record("rudec.i", max(first, second), quad)
    verdict.record("rudec.ii", opnorm(p @ t - t @ p), lin)
    verdict.record("rudec.iii", max(opnorm(comp @ t @ p), opnorm(comp @ ts @ p)), lin)
    normal_pair = _is_normal(t, tol) and _is_normal(_compressed(t, p, tol), tol)
    verdict.record("rudec.iv", first, quad, applicable=normal_pair)
    verdict.check_agreement("rudec", ["rudec.i", "rudec.ii", "rudec.iii", "rudec.iv"])

    if pq is not None:
        pp, qq = int(pq[0]), int(pq[1])
        if (pp, qq) == (0, 0) or pp < 0 or qq < 0:
            raise ValueError("(p, q) must be a nonzero pair of nonnegative integers")
        n = spectral_decompose(t, tol)
        u, absn = polar_unitary(n, tol)
        scale = max(1.0, opnorm(t))

        def comm(x: np.ndarray) -> float:
            return opnorm(p @ x - x @ p)

        def thr(deg: int) -> float:
            return tol.bound(scale ** max(deg, 1))

        verdict.record("npq.i", comm(monomial(t, pp, qq)) / scale ** max(pp + qq - 1, 0), thr(1))
        verdict.record("npq.ii", max(comm(absn), comm(_power_of_unitary(u, qq - pp))), thr(1))
        k = abs(qq - pp)
        labels = ["npq.i", "npq.ii"]
        if k:
            family = [(a, a + k) for a in range(NPQ_FAMILY_DEPTH + 1)]
            family += [(a + k, a) for a in range(NPQ_FAMILY_DEPTH + 1)]
            worst = max(comm(monomial(t, a, b)) / scale ** max(a + b - 1, 0) for a, b in family)
            verdict.record("npq.iii", worst, thr(1))
            verdict.record("npq.iv", comm(monomial(t, 0, k)) / scale ** max(k - 1, 0), thr(1))
            labels += ["npq.iii", "npq.iv"]
        verdict.check_agreement("npq", labels)
    return verdict


# --- moment compressions force commutation with N^d ------------------------

VERIFIED = "Verified"
HYPOTHESIS_NOT_MET = "HypothesisNotMet"
CONCLUSION_FAILED = "ConclusionFailed"


def main1_verify(n: NormalOperator, basis_h, t, xi: ExponentSet,
                 tol: ToleranceConfig | None = None) -> CommutationVerdict:
    """Check that matching compressed moments on ``xi`` force the conclusions.

    The hypothesis is ``T*^m T^n = P N*^m N^n |_H`` for all ``(m, n)`` in
    ``xi``. If it fails the status is ``HypothesisNotMet`` and nothing is
    asserted. Otherwise the checked conclusions are ``T*^k T^k = P N*^k N^k |_H``
    for ``k`` up to the largest degree plus two, commutation of ``P`` with
    ``N^d``, ``|N|`` and ``U^d`` (``d`` the gcd of the off-diagonal
    differences), and the splitting of ``H`` along ``ker N`` and its
    complement. ``full_commutator`` (``||PN - NP||``) is informational.
    """
    tol = tol or default_tol()
    sigma = sigma_condition(xi)
    if sigma is None:
        raise SigmaViolation("exponent set lacks (p,q), (r,r) with p != q and p + q < 2r")
    basis = check_orthonormal(basis_h, tol)
    t_mat = t.matrix if isinstance(t, NormalOperator) else as_matrix(t)
    spectral_decompose(t_mat, tol)  # normality gate
    if t_mat.shape[0] != basis.shape[1]:
        raise ShapeMismatch("T must act on H")
    nm = n.matrix
    p = basis @ adjoint(basis)
    scale = max(1.0, opnorm(nm), opnorm(t_mat))
    verdict = CommutationVerdict()

    for m, k in xi:
        resid = opnorm(monomial(t_mat, m, k) - compression_moment(n, basis, m, k, tol))
        verdict.record(f"hypothesis.({m},{k})", resid, tol.bound(scale ** (m + k)))
    verdict.residuals["full_commutator"] = opnorm(p @ nm - nm @ p)
    if not all(v for lab, v in verdict.holds.items() if lab.startswith("hypothesis")):
        verdict.status = HYPOTHESIS_NOT_MET
        return verdict

    d = gcd_diffs(xi)
    top = max(m + k for m, k in xi) + 2
    for k in range(top + 1):
        resid = opnorm(monomial(t_mat, k, k) - compression_moment(n, basis, k, k, tol))
        verdict.record(f"i.({k},{k})", resid, tol.bound(scale ** (2 * k)))
    u, absn = polar_unitary(n, tol)
    nd = np.linalg.matrix_power(nm, d)
    verdict.record("ii.N^d", opnorm(p @ nd - nd @ p), tol.bound(scale**d))
    verdict.record("ii.|N|", opnorm(p @ absn - absn @ p), tol.bound(scale))
    ud = np.linalg.matrix_power(u, d)
    verdict.record("ii.U^d", opnorm(p @ ud - ud @ p), tol.bound(1.0))
    q = kernel_projection(n, tol)
    verdict.record("iii.kernel_split", opnorm(p @ q - q @ p), tol.bound(1.0))
    sv_ker = np.linalg.svd(q @ basis, compute_uv=False)
    sv_ran = np.linalg.svd((np.eye(len(q)) - q) @ basis, compute_uv=False)
    split = int(np.sum(sv_ker > 1 - 1e-8)) + int(np.sum(sv_ran > 1 - 1e-8))
    verdict.residuals["iii.dimension_defect"] = float(basis.shape[1] - split)
    conclusions = [lab for lab in verdict.holds if not lab.startswith("hypothesis")]
    ok = all(verdict.holds[lab] for lab in conclusions) and split == basis.shape[1]
    verdict.status = VERIFIED if ok else CONCLUSION_FAILED
    return verdict


# --- instance generators ----------------------------------------------------

def random_psd(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    return g @ adjoint(g) / rank


def random_contraction(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return g / (opnorm(g) * rng.uniform(1.0, 2.0))


def random_projection(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    rank = int(rng.integers(1, dim)) if rank is None else rank
    w = random_unitary(dim, rng)[:, :rank]
    return w @ adjoint(w)


def commuting_projection(a: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """A projection ``P != I, 0`` onto a span of eigenvectors of the Hermitian ``a``."""
    _, q = np.linalg.eigh(_herm(a))
    dim = len(a)
    keep = rng.permutation(dim)[: int(rng.integers(1, dim))]
    w = q[:, np.sort(keep)]
    return w @ adjoint(w)


def reducing_pair(dim: int, rng: np.random.Generator, perturb: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """``(T, P)`` with ``ran P`` reducing ``T``; ``perturb`` adds a coupling block of that norm."""
    k = int(rng.integers(1, dim))
    blocks = np.zeros((dim, dim), dtype=complex)
    blocks[:k, :k] = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    blocks[k:, k:] = rng.normal(size=(dim - k, dim - k)) + 1j * rng.normal(size=(dim - k, dim - k))
    if perturb:
        c = rng.normal(size=(dim - k, k)) + 1j * rng.normal(size=(dim - k, k))
        blocks[k:, :k] = perturb * c / opnorm(c)
    w = random_unitary(dim, rng)
    proj = np.zeros((dim, dim))
    proj[:k, :k] = np.eye(k)
    return w @ blocks @ adjoint(w), w @ proj @ adjoint(w)


def normal_reducing_pair(dim: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Normal ``T`` and a projection onto a sum of its eigenvectors."""
    vals = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    w = random_unitary(dim, rng)
    t = (w * vals) @ adjoint(w)
    k = int(rng.integers(1, dim))
    return t, w[:, :k] @ adjoint(w[:, :k])


def clustered_normal_pair(dim: int, k: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Normal ``N`` whose eigenvalues come in orbits ``r e^{i theta} * (k-th roots of unity)``
    and a projection that is block diagonal along the orbit eigenspaces.

    ``P`` then commutes with ``|N|``, ``U^k`` and ``N^k`` without commuting
    with ``N`` in general.
    """
    vals, labels = [], []
    cluster = 0
    while len(vals) < dim:
        r, theta = rng.uniform(0.5, 2.0), rng.uniform(0, 2 * np.pi / max(k, 1))
        size = min(int(rng.integers(1, k + 1)), dim - len(vals))
        roots = rng.choice(k, size=size, replace=False) if k > 1 else np.zeros(size, dtype=int)
        for j in roots:
            vals.append(r * np.exp(1j * (theta + 2 * np.pi * j / k)))
            labels.append(cluster)
        cluster += 1
    w = random_unitary(dim, rng)
    n = (w * np.array(vals)) @ adjoint(w)
    proj = np.zeros((dim, dim), dtype=complex)
    for c in range(cluster):
        idx = [i for i, lab in enumerate(labels) if lab == c]
        sub = len(idx)
        rank = int(rng.integers(0, sub + 1))
        if rank:
            blk = random_unitary(sub, rng)[:, :rank]
            proj[np.ix_(idx, idx)] = blk @ adjoint(blk)
    return n, w @ proj @ adjoint(w)


def sharpness_instance() -> tuple[NormalOperator, np.ndarray, np.ndarray, ExponentSet]:
    """``N = diag(1, -1)``, ``H`` spanned by ``(1, 1)/sqrt 2``, ``T = [1]``, ``xi = {(0,2), (2,2)}``."""
    n = spectral_decompose(np.diag([1.0, -1.0]))
    basis = np.array([[1.0], [1.0]]) / math.sqrt(2)
    return n, basis, np.array([[1.0]]), ExponentSet.of((0, 2), (2, 2))


def root_cluster_instance(dim: int, d: int, rng: np.random.Generator):
    """Instance satisfying the moment hypothesis for ``xi = {(0,d), (d,d)}``.

    ``N`` has eigenvalue orbits ``r e^{i theta}`` times ``d``-th roots of
    unity; ``H`` takes random subspaces of the orbit eigenspaces and ``T``
    acts on each piece as the scalar ``r e^{i theta}``. ``P`` then commutes
    with ``N^d`` and ``|N|`` but usually not with ``N``.
    """
    vals, labels, orbit_vals = [], [], []
    while len(vals) < dim:
        r, theta = rng.uniform(0.5, 2.0), rng.uniform(0, 2 * np.pi / d)
        size = min(int(rng.integers(1, d + 1)), dim - len(vals))
        for j in rng.choice(d, size=size, replace=False):
            vals.append(r * np.exp(1j * (theta + 2 * np.pi * j / d)))
            labels.append(len(orbit_vals))
        orbit_vals.append(r * np.exp(1j * theta))
    w = random_unitary(dim, rng)
    n = spectral_decompose((w * np.array(vals)) @ adjoint(w))
    cols, t_diag = [], []
    for c, value in enumerate(orbit_vals):
        idx = [i for i, lab in enumerate(labels) if lab == c]
        rank = int(rng.integers(0, len(idx) + 1))
        if rank:
            blk = random_unitary(len(idx), rng)[:, :rank]
            cols.append(w[:, idx] @ blk)
            t_diag += [value] * rank
    if not cols:
        cols, t_diag = [w[:, [0]]], [orbit_vals[labels[0]]]
    basis = np.hstack(cols)
    return n, basis, np.diag(t_diag), ExponentSet.of((0, d), (d, d))


def selftest(rng: np.random.Generator, hansen_draws: int = 500, lieb_ruskai_draws: int = 200,
             rudec_draws: int = 500, npq_draws: int = 200, main1_draws: int = 100,
             max_dim: int = 6) -> dict:
    """Run every randomized inequality and equivalence suite; return violation counts."""
    out: dict[str, dict] = {}

    bad = 0
    worst = math.inf
    for _ in range(hansen_draws):
        dim = int(rng.integers(1, max_dim + 1))
        res = hansen_check(random_psd(dim, rng), random_contraction(dim, rng), float(rng.uniform(0.05, 0.95)))
        worst = min(worst, res.gap)
        bad += res.gap < -INEQUALITY_TOL
    out["hansen"] = {"draws": hansen_draws, "violations": int(bad), "min_gap": worst}

    mismatches = 0
    curated = max(1, hansen_draws // 10)
    for i in range(curated):
        dim = int(rng.integers(2, max_dim + 1))
        a = random_psd(dim, rng)
        p = commuting_projection(a, rng) if i % 2 == 0 else random_projection(dim, rng)
        res = hansen_check(a, p, float(rng.uniform(0.05, 0.95)))
        commutes = res.commutator <= EQUALITY_TOL * max(1.0, opnorm(a))
        mismatches += res.equality != commutes or commutes != (i % 2 == 0)
    out["hansen_equality"] = {"instances": curated, "mismatches": int(mismatches)}

    bad = 0
    for _ in range(lieb_ruskai_draws):
        q = int(rng.integers(1, max_dim + 1))
        rows = int(rng.integers(1, max_dim + 1))
        cols = int(rng.integers(1, max_dim + 1))
        r = rng.normal(size=(q, cols)) + 1j * rng.normal(size=(q, cols))
        a = rng.normal(size=(rows, q)) + 1j * rng.normal(size=(rows, q))
        b = rng.normal(size=(rows, q)) + 1j * rng.normal(size=(rows, q))
        res = lieb_ruskai_check(r, a, b)
        scale = max(1.0, opnorm(adjoint(r) @ adjoint(a) @ a @ r))
        bad += min(res.gaps) < -INEQUALITY_TOL * scale or not res.monotone
    out["lieb_ruskai"] = {"draws": lieb_ruskai_draws, "violations": int(bad)}

    dis = 0
    for i in range(rudec_draws):
        dim = int(rng.integers(2, max_dim + 1))
        kind = i % 4
        if kind == 0:
            t, p = reducing_pair(dim, rng)
        elif kind == 1:
            t, p = reducing_pair(dim, rng, perturb=float(10 ** rng.uniform(-3, 0)))
        elif kind == 2:
            t, p = normal_reducing_pair(dim, rng)
        else:
            t, p = random_normal_matrix(dim, rng), random_projection(dim, rng)
        dis += len(projection_commutation_check(t, p).disagreements)
    out["rudec"] = {"draws": rudec_draws, "disagreements": int(dis)}

    dis = 0
    pqs = [(0, 1), (0, 2), (1, 2), (1, 3)]
    for i in range(npq_draws):
        dim = int(rng.integers(2, max_dim + 1))
        pq = pqs[i % 4]
        if i % 3 == 2:
            n, p = random_normal_matrix(dim, rng), random_projection(dim, rng)
        else:
            n, p = clustered_normal_pair(dim, int(rng.integers(1, 4)), rng)
        dis += len(projection_commutation_check(n, p, pq).disagreements)
    out["npq"] = {"draws": npq_draws, "disagreements": int(dis)}

    failures = 0
    verified = 0
    for i in range(main1_draws):
        dim = int(rng.integers(2, max_dim + 1))
        n, basis, t, xi = root_cluster_instance(dim, int(rng.integers(1, 4)), rng)
        status = main1_verify(n, basis, t, xi).status
        failures += status == CONCLUSION_FAILED
        verified += status == VERIFIED
    status = main1_verify(*sharpness_instance()).status
    failures += status == CONCLUSION_FAILED
    out["main1"] = {"draws": main1_draws + 1, "verified": int(verified + (status == VERIFIED)),
                    "conclusion_failures": int(failures)}
    return out


def random_normal_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    vals = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    w = random_unitary(dim, rng)
    return (w * vals) @ adjoint(w)


def selftest_violations(summary: dict) -> int:
    keys = ("violations", "mismatches", "disagreements", "conclusion_failures")
    return int(sum(v.get(k, 0) for v in summary.values() for k in keys))
