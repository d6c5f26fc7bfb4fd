import math

import numpy as np
import pytest

from hrlab.errors import NotContraction, NotProjection, NotPsd, ShapeMismatch, SigmaViolation
from hrlab.exponents import ExponentSet
from hrlab.inequalities import (
    CONCLUSION_FAILED,
    HYPOTHESIS_NOT_MET,
    VERIFIED,
    clustered_normal_pair,
    commuting_projection,
    hansen_check,
    lieb_ruskai_check,
    main1_verify,
    normal_reducing_pair,
    projection_commutation_check,
    random_contraction,
    random_projection,
    random_psd,
    reducing_pair,
    root_cluster_instance,
    selftest,
    selftest_violations,
    sharpness_instance,
)
from hrlab.matrix_core import opnorm, random_normal, spectral_decompose

DIAG = np.diag([1.0, -1.0])
P_DIAG = np.full((2, 2), 0.5)


def test_hansen_examples():
    assert hansen_check(np.diag([1.0, 4.0]), np.eye(2), 0.5).equality
    res = hansen_check(np.diag([1.0, 4.0]), P_DIAG, 0.5)
    # difference is (sqrt(5/2) - 3/2) P: positive on ran P, zero on its complement
    assert not res.equality and res.gap == pytest.approx(0, abs=1e-12)
    assert res.difference == pytest.approx(math.sqrt(2.5) - 1.5)
    assert hansen_check(np.diag([1.0, 4.0]), np.diag([1.0, 0.0]), 0.3).equality


def test_hansen_errors():
    with pytest.raises(NotContraction):
        hansen_check(np.eye(2), 2 * np.eye(2), 0.5)
    with pytest.raises(NotPsd):
        hansen_check(DIAG, np.eye(2), 0.5)


def test_hansen_random(rng):
    for _ in range(200):
        dim = int(rng.integers(1, 7))
        assert hansen_check(random_psd(dim, rng), random_contraction(dim, rng), rng.uniform(0.05, 0.95)).gap >= -1e-9


def test_hansen_equality_for_projections(rng):
    for i in range(60):
        dim = int(rng.integers(2, 6))
        a = random_psd(dim, rng, rank=int(rng.integers(1, dim + 1)))
        p = commuting_projection(a, rng) if i % 2 else random_projection(dim, rng)
        res = hansen_check(a, p, rng.uniform(0.1, 0.9))
        assert res.equality == (res.commutator <= 1e-10 * max(1, opnorm(a)))


def test_lieb_ruskai_examples(rng):
    a = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    b = rng.normal(size=(4, 3))
    res = lieb_ruskai_check(np.eye(3), a, b)
    assert min(res.gaps) >= -1e-9 and res.monotone
    res = lieb_ruskai_check(np.eye(3), a, a, eps_schedule=[1e-2, 1e-4, 1e-6, 1e-8])
    assert res.gaps[-1] <= res.gaps[0] and abs(res.gaps[-1]) <= 1e-6
    zero = lieb_ruskai_check(np.eye(3), np.zeros((4, 3)), b)
    assert all(g == 0 for g in zero.gaps)
    with pytest.raises(ShapeMismatch):
        lieb_ruskai_check(np.eye(2), a, b)
    with pytest.raises(ValueError):
        lieb_ruskai_check(np.eye(3), a, b, eps_schedule=[1e-3, 1e-2])


def test_commutation_examples():
    v = projection_commutation_check(DIAG, np.eye(2))
    assert all(v.holds.values())
    v = projection_commutation_check(DIAG, P_DIAG, (0, 2))
    assert v.residuals["rudec.i"] == pytest.approx(1)
    assert not any(v.holds[k] for k in ("rudec.i", "rudec.ii", "rudec.iii", "rudec.iv"))
    assert all(v.holds[k] for k in ("npq.i", "npq.ii", "npq.iii", "npq.iv"))
    assert v.consistent
    with pytest.raises(NotProjection):
        projection_commutation_check(DIAG, np.diag([1.0, 0.5]))


def test_rudec_agreement(rng):
    for i in range(200):
        dim = int(rng.integers(2, 6))
        t, p = [reducing_pair(dim, rng), reducing_pair(dim, rng, perturb=1e-2), normal_reducing_pair(dim, rng),
                (random_normal(dim, rng), random_projection(dim, rng))][i % 4]
        v = projection_commutation_check(t, p)
        assert v.consistent, v.to_json()
        assert v.holds["rudec.ii"] == (i % 4 in (0, 2))


def test_rudec_condition_four_needs_normality():
    # a non-normal T for which the one-sided compression identity holds but P does not commute
    t = np.array([[0.0, 1.0], [0.0, 0.0]])
    p = np.diag([1.0, 0.0])
    v = projection_commutation_check(t, p)
    assert v.residuals["rudec.iv"] <= 1e-12 and not v.holds["rudec.ii"]
    assert not v.applicable["rudec.iv"] and v.consistent


def test_npq_agreement(rng):
    for i in range(100):
        dim = int(rng.integers(2, 6))
        n, p = clustered_normal_pair(dim, int(rng.integers(1, 4)), rng)
        for pq in [(0, 1), (0, 2), (1, 2), (1, 3)]:
            assert projection_commutation_check(n, p, pq).consistent


def test_main1_examples():
    v = main1_verify(*sharpness_instance())
    assert v.status == VERIFIED
    assert v.residuals["ii.N^d"] <= 1e-12 and v.residuals["full_commutator"] >= 0.9
    n = spectral_decompose(np.diag([1.0, 2.0, 3.0]))
    basis = np.eye(3)[:, :2]
    assert main1_verify(n, basis, np.diag([1.0, 2.0]), ExponentSet.of((0, 1), (1, 1))).status == VERIFIED
    assert main1_verify(n, basis, np.diag([2.0, 1.0]), ExponentSet.of((0, 1), (1, 1))).status == HYPOTHESIS_NOT_MET
    with pytest.raises(SigmaViolation):
        main1_verify(n, basis, np.diag([1.0, 2.0]), ExponentSet.of((1, 2), (1, 1)))


def test_main1_random_instances(rng):
    for _ in range(60):
        dim = int(rng.integers(2, 7))
        inst = root_cluster_instance(dim, int(rng.integers(1, 4)), rng)
        assert main1_verify(*inst).status == VERIFIED
    for _ in range(20):
        n = spectral_decompose(random_normal(3, rng))
        basis = np.linalg.qr(rng.normal(size=(3, 2)))[0]
        t = np.diag(rng.normal(size=2))
        assert main1_verify(n, basis, t, ExponentSet.of((0, 1), (1, 1))).status != CONCLUSION_FAILED


def test_selftest_is_clean(rng):
    summary = selftest(rng, hansen_draws=50, lieb_ruskai_draws=20, rudec_draws=40, npq_draws=20, main1_draws=10)
    assert selftest_violations(summary) == 0
