import numpy as np
import pytest

from helpers import random_povm, spectral_povm
from hrlab.errors import ClusterAmbiguity, InvalidPovm
from hrlab.matrix_core import monomial, opnorm, random_normal, spectral_decompose
from hrlab.povm import (
    Povm,
    dilation_residuals,
    is_spectral,
    is_spectral_measure_of,
    moment_operator,
    naimark_dilate,
    project_to_povm,
    spectral_measure_of,
    ucp_apply,
)

HALF = Povm((1, -1), (np.array([[0.5]]), np.array([[0.5]])))


def test_construction_validation():
    with pytest.raises(InvalidPovm):
        Povm((1, 1), (np.eye(1) / 2, np.eye(1) / 2))
    with pytest.raises(InvalidPovm):
        Povm((1, 2), (np.eye(1), np.eye(1)))
    with pytest.raises(InvalidPovm):
        Povm((1, 2), (np.diag([2.0, 0.5]), np.diag([-1.0, 0.5])))
    with pytest.raises(InvalidPovm):
        Povm((1, 2), (np.array([[0.5, 0.1], [0, 0.5]]), np.array([[0.5, -0.1], [0, 0.5]])))


def test_moment_examples(rng):
    f = random_povm(rng, 3, 4)
    assert np.allclose(moment_operator(f, 0, 0), np.eye(3))
    assert np.allclose(moment_operator(HALF, 0, 1), [[0]])
    assert np.allclose(moment_operator(HALF, 1, 1), [[1]])


def test_spectral_examples(rng):
    assert not is_spectral(HALF)
    p = np.diag([1.0, 0.0])
    assert is_spectral(Povm((0, 1), (p, np.eye(2) - p)))
    t = spectral_decompose(np.diag([1.0, 1.0, -1.0]))
    f = spectral_measure_of(t)
    assert f.support == (-1, 1)
    assert np.allclose(f.effects[0], np.diag([0, 0, 1])) and np.allclose(f.effects[1], np.diag([1, 1, 0]))
    f = spectral_measure_of(spectral_decompose(2j * np.eye(3)))
    assert f.support == (2j,) and np.allclose(f.effects[0], np.eye(3))


def test_spectral_measure_reconstructs(rng):
    for _ in range(30):
        dim = int(rng.integers(1, 7))
        t = spectral_decompose(random_normal(dim, rng))
        f = spectral_measure_of(t)
        assert is_spectral(f) and is_spectral_measure_of(f, t)
        assert opnorm(moment_operator(f, 0, 1) - t.matrix) <= 1e-9
        for m, n in [(1, 2), (2, 2), (0, 3)]:
            assert opnorm(moment_operator(f, m, n) - monomial(t.matrix, m, n)) <= 1e-9


def test_cluster_ambiguity():
    with pytest.raises(ClusterAmbiguity):
        spectral_measure_of(spectral_decompose(np.diag([1.0, 1.0 + 5e-10])))
    merged = spectral_measure_of(spectral_decompose(np.diag([1.0, 1.0 + 1e-12])))
    assert merged.k == 1


def test_is_spectral_measure_of_rejects():
    t = spectral_decompose([[1.0]])
    assert not is_spectral_measure_of(HALF, t)
    t2 = spectral_decompose(np.diag([1.0, -1.0]))
    smeared = Povm((-1, 1), (np.full((2, 2), 0.5) * [[1, -1], [-1, 1]], np.full((2, 2), 0.5)))
    assert is_spectral(smeared) and not is_spectral_measure_of(smeared, t2)
    soft = Povm((-1, 1), (np.diag([0.5, 0.5]), np.diag([0.5, 0.5])))
    assert not is_spectral_measure_of(soft, t2)


def test_hand_dilation():
    d = naimark_dilate(HALF)
    assert d.big_dim == 2
    assert np.allclose(d.isometry, np.array([[1], [1]]) / np.sqrt(2))
    assert np.allclose(d.normal.matrix, np.diag([1, -1]))
    assert np.allclose(d.projections[0], np.diag([1, 0]))


def test_dilation_transport(rng):
    for _ in range(30):
        f = random_povm(rng, int(rng.integers(1, 5)), int(rng.integers(1, 6)))
        for minimal in (False, True):
            res = dilation_residuals(f, naimark_dilate(f, minimal=minimal))
            assert res["isometry"] <= 1e-10 and res["effects"] <= 1e-10 and res["transport"] <= 1e-9


def test_spectral_dilation_is_trivial(rng):
    for _ in range(20):
        f = spectral_povm(rng, int(rng.integers(1, 5)), int(rng.integers(1, 5)))
        d = naimark_dilate(f, minimal=True)
        assert d.big_dim == f.dim
        full = naimark_dilate(f)
        for e in full.projections:
            assert opnorm(full.projection_p @ e - e @ full.projection_p) <= 1e-10


def test_ucp_apply(rng):
    f = random_povm(rng, 3, 4)
    assert np.allclose(ucp_apply(f, lambda z: np.ones_like(z)), np.eye(3))
    assert np.allclose(ucp_apply(f, lambda z: z), moment_operator(f, 0, 1))
    assert np.allclose(ucp_apply(HALF, lambda z: np.conj(z) * z), [[1]])
    assert np.allclose(ucp_apply(HALF, [2, 4]), [[3]])


def test_projection_lands_in_povm_set(rng):
    for _ in range(20):
        raw = [rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(4)]
        eff = project_to_povm(raw)
        Povm(tuple(range(4)), tuple(eff))  # validates positivity and normalization
