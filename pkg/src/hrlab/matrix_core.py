"""Dense complex linear algebra for normal matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. A
:class:`NormalOperator` bundles a matrix with a validated spectral
decomposition ``A = Q diag(lam) Q*``.

Polar convention: :func:`polar_unitary` returns the *unitary* polar factor,
equal to the identity on the kernel. The partial-isometry factor (zero on the
kernel) is ``U @ (I - kernel_projection(N))``; no separate routine is provided.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, NoConvergence, NotHermitian, NotNormal, NotOrthonormal
from .tolerance import ToleranceConfig, default_tol

# Mixing coefficients for H + c*K. Irrational-looking values so that two
# distinct eigenvalues almost never collide after the real projection.
_MIX = (0.6180339887498949, -1.3247179572447460, 2.2360679774997896, 0.4142135623730950)


def as_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def opnorm(a: np.ndarray) -> float:
    """Spectral norm; 0 for empty matrices."""
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def adjoint(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return opnorm(a @ b - b @ a)


def _lex_order(values: np.ndarray) -> np.ndarray:
    # np.lexsort sorts by the last key first.
    return np.lexsort((values.imag, values.real))


@dataclass(frozen=True, eq=False)
class NormalOperator:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenbasis: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __post_init__(self) -> None:
        for arr in (self.matrix, self.eigenvalues, self.eigenbasis):
            arr.setflags(write=False)


def spectral_decompose(a, tol: ToleranceConfig | None = None) -> NormalOperator:
    """Diagonalize a normal matrix.

    The Hermitian and skew parts ``H = (A + A*)/2``, ``K = (A - A*)/(2i)``
    commute for normal ``A``; an eigenbasis of ``H + c K`` for generic ``c``
    diagonalizes both. Several mixing constants are tried until the
    reconstruction check passes.

    Raises:
        NotNormal: if ``||A A* - A* A|| > tol.bound(||A||**2)``.
        NoConvergence: if no mixing constant yields a valid decomposition.
    """
    tol = tol or default_tol()
    a = as_matrix(a)
    dim = a.shape[0]
    scale = opnorm(a)
    comm = opnorm(a @ adjoint(a) - adjoint(a) @ a)
    if comm > tol.bound(scale**2):
        raise NotNormal(f"commutator norm {comm:.3e} exceeds tolerance at scale {scale:.3e}")
    herm = (a + adjoint(a)) / 2
    skew = (a - adjoint(a)) / 2j
    eye = np.eye(dim)
    chosen = None
    for c in _MIX:
        try:
            _, q = np.linalg.eigh(herm + c * skew)
        except np.linalg.LinAlgError:
            continue
        lam = np.einsum("ij,ij->j", q.conj(), a @ q)
        recon = opnorm(a - (q * lam) @ adjoint(q))
        ortho = opnorm(adjoint(q) @ q - eye)
        if recon <= tol.bound(scale) and ortho <= tol.bound(1.0):
            chosen = (lam, q)
            break
    if chosen is None:
        raise NoConvergence("simultaneous diagonalization failed to reconstruct the input")
    lam, q = chosen
    order = _lex_order(lam)
    return NormalOperator(a, lam[order].copy(), q[:, order].copy())


def func_calc(n: NormalOperator, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """``Q diag(f(lam)) Q*`` for a pointwise ``f`` acting on the eigenvalue array."""
    with np.errstate(all="ignore"):
        values = np.asarray(f(n.eigenvalues.copy()), dtype=complex)
    if values.shape != n.eigenvalues.shape:
        values = np.broadcast_to(values, n.eigenvalues.shape)
    if not np.all(np.isfinite(values)):
        bad = n.eigenvalues[~np.isfinite(values)]
        raise DomainError(f"function undefined at eigenvalue(s) {bad.tolist()}")
    q = n.eigenbasis
    return (q * values) @ adjoint(q)


def psd_power(a, s: float, tol: ToleranceConfig | None = None) -> np.ndarray:
    """``A**s`` for Hermitian PSD ``A``; eigenvalues within tolerance of 0 are clamped."""
    tol = tol or default_tol()
    a = as_matrix(a)
    _check_hermitian(a, tol)
    w, q = np.linalg.eigh((a + adjoint(a)) / 2)
    floor = -tol.bound(opnorm(a))
    if np.any(w < floor):
        raise DomainError(f"negative eigenvalue {w.min():.3e} in PSD functional calculus")
    w = np.where(w <= -floor, 0.0, w)
    with np.errstate(divide="ignore"):
        vals = np.where(w > 0, w**s, 0.0 if s > 0 else 1.0)
    return (q * vals) @ adjoint(q)


def psd_sqrt(a, tol: ToleranceConfig | None = None) -> np.ndarray:
    return psd_power(a, 0.5, tol)


def _zero_mask(n: NormalOperator, tol: ToleranceConfig) -> np.ndarray:
    mods = np.abs(n.eigenvalues)
    return mods <= tol.bound(mods.max(initial=0.0))


def polar_unitary(n: NormalOperator, tol: ToleranceConfig | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Unitary polar decomposition ``N = U |N| = |N| U`` with ``U = I`` on ``ker N``."""
    tol = tol or default_tol()
    lam = n.eigenvalues
    zero = _zero_mask(n, tol)
    mods = np.abs(lam)
    phases = np.where(zero, 1.0 + 0j, lam / np.where(zero, 1.0, mods))
    q = n.eigenbasis
    u = (q * phases) @ adjoint(q)
    abs_n = (q * np.where(zero, 0.0, mods)) @ adjoint(q)
    return u, abs_n


def kernel_projection(n: NormalOperator, tol: ToleranceConfig | None = None) -> np.ndarray:
    tol = tol or default_tol()
    q = n.eigenbasis[:, _zero_mask(n, tol)]
    return q @ adjoint(q)


def check_orthonormal(basis, tol: ToleranceConfig | None = None) -> np.ndarray:
    tol = tol or default_tol()
    b = np.array(basis, dtype=complex)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    gram = adjoint(b) @ b
    err = opnorm(gram - np.eye(b.shape[1]))
    if err > tol.bound(1.0):
        raise NotOrthonormal(f"basis columns deviate from orthonormality by {err:.3e}")
    return b


def monomial(a: np.ndarray, m: int, n: int) -> np.ndarray:
    """``A*^m A^n``."""
    if m < 0 or n < 0:
        raise ValueError("exponents must be nonnegative")
    return np.linalg.matrix_power(adjoint(a), m) @ np.linalg.matrix_power(a, n)


def compression_moment(n: NormalOperator, basis_h, m: int, k: int,
                       tol: ToleranceConfig | None = None) -> np.ndarray:
    """``B* N*^m N^k B`` for an orthonormal column basis ``B`` of ``H``."""
    b = check_orthonormal(basis_h, tol)
    if b.shape[0] != n.dim:
        raise ValueError("basis rows must match the operator dimension")
    if m == 0 and k == 0:
        return adjoint(b) @ b
    return adjoint(b) @ monomial(n.matrix, m, k) @ b


def _check_hermitian(a: np.ndarray, tol: ToleranceConfig) -> None:
    err = opnorm(a - adjoint(a))
    if err > tol.bound(opnorm(a)):
        raise NotHermitian(f"matrix is not Hermitian (||A - A*|| = {err:.3e})")


def psd_gap(a, tol: ToleranceConfig | None = None) -> float:
    """Smallest eigenvalue of a Hermitian matrix; ``A >= 0`` iff the gap is ``>= -tol``."""
    tol = tol or default_tol()
    a = as_matrix(a)
    _check_hermitian(a, tol)
    return float(np.linalg.eigvalsh((a + adjoint(a)) / 2)[0])


def is_psd(a, tol: ToleranceConfig | None = None) -> bool:
    tol = tol or default_tol()
    a = as_matrix(a)
    return psd_gap(a, tol) >= -tol.bound(opnorm(a))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_normal(dim: int, rng: np.random.Generator, eigenvalues=None) -> np.ndarray:
    """``Q diag(lam) Q*`` with Haar-ish ``Q``; eigenvalues standard complex Gaussian by default."""
    if eigenvalues is None:
        eigenvalues = (rng.normal(size=dim) + 1j * rng.normal(size=dim)) / np.sqrt(2)
    q = random_unitary(dim, rng)
    return (q * np.asarray(eigenvalues, dtype=complex)) @ adjoint(q)
