import numpy as np

from hrlab.matrix_core import adjoint, random_normal, spectral_decompose
from hrlab.povm import Povm


def random_povm(rng, dim, k, real_support=False):
    """Random POVM with full-rank effects normalized by congruence."""
    gs = [rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)) for _ in range(k)]
    raw = [g @ adjoint(g) for g in gs]
    w, q = np.linalg.eigh(sum(raw))
    inv = (q * w**-0.5) @ adjoint(q)
    effects = [inv @ e @ inv for e in raw]
    effects = [(e + adjoint(e)) / 2 for e in effects]
    if real_support:
        support = rng.choice(np.arange(-6, 7), size=k, replace=False).astype(complex)
    else:
        support = rng.normal(size=k) + 1j * rng.normal(size=k)
    return Povm(tuple(support), tuple(effects))


def spectral_povm(rng, dim, k, real_support=False):
    """POVM whose effects are orthogonal projections (some possibly zero)."""
    q = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))[0]
    labels = rng.integers(0, k, size=dim)
    effects = [q[:, labels == j] @ adjoint(q[:, labels == j]) for j in range(k)]
    if real_support:
        support = rng.choice(np.arange(-6, 7), size=k, replace=False).astype(complex)
    else:
        support = rng.normal(size=k) + 1j * rng.normal(size=k)
    return Povm(tuple(support), tuple(effects))


def separated_normal(rng, dim, low=0.5, high=2.0, gap=0.3):
    """Normal operator with eigenvalues in an annulus and pairwise distance at least ``gap``."""
    while True:
        vals = rng.uniform(low, high, dim) * np.exp(2j * np.pi * rng.uniform(size=dim))
        if all(abs(a - b) >= gap for i, a in enumerate(vals) for b in vals[i + 1:]):
            return spectral_decompose(random_normal(dim, rng, vals))


HALF_POVM = {"support": [1, -1], "effects": [[[0.5]], [[0.5]]]}
DIAG_I = {"support": [1, {"re": 0, "im": 1}],
          "effects": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}
GRID = [{"re": a, "im": b} for a in (0, 1) for b in (0, 1)]

CLI_INPUTS = {
    "generates": {"xi": [[0, 2]], "points": [1, -1]},
    "verdict": {"xi": [[0, 1], [1, 1]], "points": GRID},
    "spectrality": {"povm": DIAG_I, "operator": [[1, 0], [0, {"re": 0, "im": 1}]], "xi": [[1, 2], [2, 2]]},
    "dilate": {"povm": HALF_POVM, "minimal": True},
    "choquet": {"points": [-1, 0, 1], "space": [[1, 1]], "require_separation": False},
    "isnytos": {"d": [2, 3], "pairs": [[0, 2], [0, 3]], "beta": ["1/2", "1/2"]},
    "converge": {"points": [-1, 0, 1], "space": [[1, 1]], "lambda0": 1, "require_separation": False},
    "search-scalar": {"p": 1, "q": 2, "r": 1, "t": 1},
    "search-povm": {"xi": [[1, 2], [2, 2]], "trials": 2, "budget": 200},
    "inequalities-selftest": {"hansen_draws": 20, "lieb_ruskai_draws": 10, "rudec_draws": 20,
                              "npq_draws": 10, "main1_draws": 5},
}
