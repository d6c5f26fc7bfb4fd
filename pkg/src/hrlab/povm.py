"""Finitely supported semispectral measures (POVMs).

A :class:`Povm` is a list of distinct complex support points ``z_j`` with
positive effects ``F_j`` summing to the identity. Continuous measures are out
of scope: every statement tested here is about atomic instances, and for
finite support the regularity questions of the general theory are vacuous.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .errors import ClusterAmbiguity, InvalidPovm
from .matrix_core import (
    NormalOperator,
    adjoint,
    as_matrix,
    monomial,
    opnorm,
    psd_gap,
    psd_sqrt,
)
from .tolerance import ToleranceConfig, default_tol


@dataclass(frozen=True, eq=False)
class Povm:
    support: tuple
    effects: tuple
    tol: ToleranceConfig = field(default=None, repr=False)

    def __post_init__(self) -> None:
        tol = self.tol or default_tol()
        support = tuple(complex(z) for z in self.support)
        effects = tuple(as_matrix(e) for e in self.effects)
        if not support or len(support) != len(effects):
            raise InvalidPovm("support and effects must be nonempty and of equal length")
        if len(set(support)) != len(support):
            raise InvalidPovm("support points must be pairwise distinct")
        dim = effects[0].shape[0]
        if any(e.shape != (dim, dim) for e in effects):
            raise InvalidPovm("effects must share one square shape")
        for j, e in enumerate(effects):
            e.setflags(write=False)
            if opnorm(e - adjoint(e)) > tol.bound(opnorm(e)):
                raise InvalidPovm(f"effect {j} is not Hermitian")
            if psd_gap(e, tol) < -tol.bound(opnorm(e)):
                raise InvalidPovm(f"effect {j} is not positive")
        total = sum(effects)
        err = opnorm(total - np.eye(dim))
        if err > tol.bound(1.0):
            raise InvalidPovm(f"effects sum to identity only within {err:.3e}")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "effects", effects)
        object.__setattr__(self, "tol", tol)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    @property
    def k(self) -> int:
        return len(self.support)

    @classmethod
    def scalar(cls, points: Sequence[complex], weights: Sequence[float], dim: int = 1,
               tol: ToleranceConfig | None = None) -> "Povm":
        """The POVM ``Delta -> mu(Delta) I`` of a probability measure ``mu``."""
        eye = np.eye(dim, dtype=complex)
        return cls(tuple(points), tuple(w * eye for w in weights), tol)


@dataclass(frozen=True, eq=False)
class Dilation:
    big_dim: int
    isometry: np.ndarray
    projections: tuple
    normal: NormalOperator
    projection_p: np.ndarray
    support: tuple


def moment_operator(f: Povm, m: int, n: int) -> np.ndarray:
    """``sum_j conj(z_j)^m z_j^n F_j``."""
    z = np.array(f.support)
    coeff = np.conj(z) ** m * z**n
    return np.einsum("j,jab->ab", coeff, np.array(f.effects))


def idempotence_defect(f: Povm) -> float:
    return max(opnorm(e @ e - e) for e in f.effects)


def is_spectral(f: Povm, tol: ToleranceConfig | None = None) -> bool:
    """True iff every effect is idempotent within tolerance.

    Idempotent effects summing to the identity are automatically pairwise
    orthogonal, so orthogonality is not tested separately.
    """
    tol = tol or f.tol
    return idempotence_defect(f) <= tol.bound(1.0)


def _clusters(values: np.ndarray, thr: float) -> list[list[int]]:
    k = len(values)
    parent = list(range(k))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if abs(values[i] - values[j]) <= thr:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def spectral_measure_of(t: NormalOperator, tol: ToleranceConfig | None = None) -> Povm:
    """Spectral measure of a normal matrix, atoms at eigenvalue clusters.

    Raises:
        ClusterAmbiguity: two eigenvalues sit between one and ten cluster
            radii apart, so neither merging nor splitting is trustworthy.
    """
    tol = tol or default_tol()
    lam = t.eigenvalues
    thr = tol.bound(float(np.abs(lam).max(initial=0.0)))
    groups = _clusters(lam, thr)
    label = np.empty(len(lam), dtype=int)
    for g, members in enumerate(groups):
        label[members] = g
    for i in range(len(lam)):
        for j in range(i + 1, len(lam)):
            if label[i] != label[j] and abs(lam[i] - lam[j]) <= 10 * thr:
                raise ClusterAmbiguity(
                    f"eigenvalues {lam[i]} and {lam[j]} are {abs(lam[i] - lam[j]):.3e} apart"
                )
    atoms = []
    for members in groups:
        z = complex(np.mean(lam[members]))
        q = t.eigenbasis[:, members]
        atoms.append((z, q @ adjoint(q)))
    atoms.sort(key=lambda a: (a[0].real, a[0].imag))
    return Povm(tuple(a[0] for a in atoms), tuple(a[1] for a in atoms), tol)


def is_spectral_measure_of(f: Povm, t: NormalOperator, tol: ToleranceConfig | None = None) -> bool:
    tol = tol or f.tol
    if f.dim != t.dim or not is_spectral(f, tol):
        return False
    recon = moment_operator(f, 0, 1)
    if opnorm(recon - t.matrix) > tol.bound(opnorm(t.matrix)):
        return False
    lam = t.eigenvalues
    thr = tol.bound(float(np.abs(lam).max(initial=0.0)))
    for z, e in zip(f.support, f.effects):
        if opnorm(e) > tol.bound(1.0) and np.min(np.abs(lam - z)) > 10 * thr:
            return False
    return True


def _diagonal_normal(values: np.ndarray) -> NormalOperator:
    values = np.asarray(values, dtype=complex)
    order = np.lexsort((values.imag, values.real))
    basis = np.eye(len(values), dtype=complex)[:, order]
    return NormalOperator(np.diag(values), values[order].copy(), basis)


def naimark_dilate(f: Povm, minimal: bool = False, tol: ToleranceConfig | None = None) -> Dilation:
    """Canonical Naimark dilation ``F_j = V* E_j V``.

    ``V`` stacks the square roots ``F_j^{1/2}``; ``E_j`` is the coordinate
    projection onto block ``j``. With ``minimal`` each block is cut down to
    the range of ``F_j^{1/2}``, which makes the big space the closed span of
    ``E_j V h``.
    """
    tol = tol or f.tol
    dim, k = f.dim, f.k
    roots = [psd_sqrt(e, tol) for e in f.effects]
    if not minimal:
        v = np.vstack(roots)
        big = dim * k
        projs = []
        diag = np.empty(big, dtype=complex)
        for j, z in enumerate(f.support):
            p = np.zeros((big, big), dtype=complex)
            p[j * dim:(j + 1) * dim, j * dim:(j + 1) * dim] = np.eye(dim)
            projs.append(p)
            diag[j * dim:(j + 1) * dim] = z
    else:
        blocks = []
        values = []
        for z, root in zip(f.support, roots):
            w, q = np.linalg.eigh(root)
            keep = q[:, w > tol.bound(1.0)]
            blocks.append(adjoint(keep) @ root)
            values.append(np.full(keep.shape[1], z, dtype=complex))
        v = np.vstack(blocks)
        big = v.shape[0]
        diag = np.concatenate(values)
        projs = []
        start = 0
        for blk in blocks:
            p = np.zeros((big, big), dtype=complex)
            p[start:start + blk.shape[0], start:start + blk.shape[0]] = np.eye(blk.shape[0])
            projs.append(p)
            start += blk.shape[0]
    return Dilation(
        big_dim=big,
        isometry=v,
        projections=tuple(projs),
        normal=_diagonal_normal(diag),
        projection_p=v @ adjoint(v),
        support=f.support,
    )


def dilation_residuals(f: Povm, d: Dilation, max_degree: int = 3) -> dict:
    """Effect and moment transport residuals of a dilation."""
    v = d.isometry
    effect = max(opnorm(adjoint(v) @ e @ v - fj) for e, fj in zip(d.projections, f.effects))
    transport = 0.0
    for m in range(max_degree + 1):
        for n in range(max_degree + 1):
            lhs = adjoint(v) @ monomial(d.normal.matrix, m, n) @ v
            transport = max(transport, opnorm(lhs - moment_operator(f, m, n)))
    return {
        "isometry": opnorm(adjoint(v) @ v - np.eye(f.dim)),
        "effects": effect,
        "transport": transport,
        "commutator_pn": opnorm(d.projection_p @ d.normal.matrix - d.normal.matrix @ d.projection_p),
    }


FunctionOnSupport = Union[Callable[[np.ndarray], np.ndarray], Sequence[complex]]


def ucp_apply(f: Povm, fn: FunctionOnSupport) -> np.ndarray:
    """``sum_j fn(z_j) F_j``: the unital positive map attached to ``f``."""
    z = np.array(f.support)
    values = np.asarray(fn(z) if callable(fn) else fn, dtype=complex)
    values = np.broadcast_to(values, z.shape)
    return np.einsum("j,jab->ab", values, np.array(f.effects))


def project_to_povm(effects: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Clip each effect to the PSD cone, then congruence-normalize so the sum is ``I``."""
    clipped = []
    for e in effects:
        h = (e + adjoint(e)) / 2
        w, q = np.linalg.eigh(h)
        clipped.append((q * np.clip(w, 0.0, None)) @ adjoint(q))
    total = sum(clipped)
    w, q = np.linalg.eigh(total)
    if w[0] < 1e-9:
        # rank-deficient sum: spread a small identity share over all effects
        lift = (1e-9 - w[0]) / len(clipped)
        eye = np.eye(total.shape[0])
        clipped = [c + lift * eye for c in clipped]
        w, q = np.linalg.eigh(sum(clipped))
    inv_sqrt = (q * w**-0.5) @ adjoint(q)
    out = [inv_sqrt @ c @ inv_sqrt for c in clipped]
    return [(c + adjoint(c)) / 2 for c in out]
