import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import weylcurv as wc
from weylcurv.liealg import (InvalidAlgebraError, LieAlgebra, Metric,
                             MetricLieAlgebra, jacobi_residual)

from helpers import random_metric_algebra, random_spd

E3 = np.eye(3)

finite = st.floats(min_value=-10.0, max_value=10.0,
                   allow_nan=False, allow_infinity=False)


def test_bracket_abelian_is_zero():
    A = wc.abelian(4)
    rng = np.random.default_rng(0)
    u, v = rng.normal(size=4), rng.normal(size=4)
    assert np.allclose(wc.bracket(A, u, v), 0.0)


def test_bracket_milnor_table():
    A = wc.milnor((1, 1, 1))
    assert np.allclose(wc.bracket(A, E3[1], E3[2]), E3[0])
    assert np.allclose(wc.bracket(A, E3[2], E3[0]), E3[1])
    assert np.allclose(wc.bracket(A, E3[0], E3[1]), E3[2])


def test_bracket_antisymmetry_random():
    rng = np.random.default_rng(1)
    A = random_metric_algebra(rng, 4)
    for _ in range(20):
        u = rng.normal(size=4)
        v = rng.normal(size=4)
        assert np.abs(wc.bracket(A, u, u)).max() < 1e-12
        assert np.allclose(wc.bracket(A, u, v), -wc.bracket(A, v, u))


def test_bracket_pairing_trilinear_antisymmetric():
    rng = np.random.default_rng(2)
    for n in (3, 4, 5):
        A = random_metric_algebra(rng, n)
        for _ in range(10):
            u, v, w = rng.normal(size=(3, n))
            a, b = rng.normal(size=2)
            lhs = wc.bracket(A, a * u + b * w, v) @ w
            rhs = a * (wc.bracket(A, u, v) @ w) + b * (wc.bracket(A, w, v) @ w)
            assert abs(lhs - rhs) < 1e-9
            assert abs(wc.bracket(A, u, v) @ w + wc.bracket(A, v, u) @ w) < 1e-10


def test_ad_matrix():
    A = wc.abelian(3)
    assert np.allclose(wc.ad(A, np.array([1.0, 2.0, 3.0])), 0.0)

    S = wc.solvable((1, 2, 3))
    adb = wc.ad(S, np.eye(4)[0])
    assert np.allclose(adb, np.diag([0.0, 1.0, 2.0, 3.0]))

    rng = np.random.default_rng(3)
    M = random_metric_algebra(rng, 4)
    for _ in range(10):
        u = rng.normal(size=4)
        assert np.abs(wc.ad(M, u) @ u).max() < 1e-12


@given(finite, finite, finite)
@settings(max_examples=50, deadline=None)
def test_milnor_triples_always_close(l1, l2, l3):
    A = wc.milnor((l1, l2, l3))
    assert jacobi_residual(A.c) <= 1e-12
    ok, res = wc.is_unimodular(A)
    assert ok and res <= 1e-12


@given(st.lists(finite.filter(lambda x: abs(x) > 1e-3), min_size=2, max_size=5))
@settings(max_examples=50, deadline=None)
def test_solvable_unimodular_iff_trace_free(mu):
    S = wc.solvable(tuple(mu))
    ok, _ = wc.is_unimodular(S)
    assert ok == (abs(sum(mu)) <= 1e-9)


def test_unimodularity():
    rng = np.random.default_rng(4)
    for _ in range(10):
        lam = rng.uniform(-2, 2, size=3)
        ok, res = wc.is_unimodular(wc.milnor(tuple(lam)))
        assert ok and res <= 1e-12

    ok, res = wc.is_unimodular(wc.solvable((1, 2, 3)))
    assert not ok
    assert res == pytest.approx(6.0)

    ok, _ = wc.is_unimodular(wc.solvable((1, -1)))
    assert ok


def test_commutator_subalgebra():
    assert wc.commutator_subalgebra(wc.abelian(3)).shape == (3, 0)

    sol = wc.solvable((1, -1))
    C = wc.commutator_subalgebra(sol)
    assert C.shape == (3, 2)
    # spans exactly the complement of b = e0
    assert np.abs(C[0, :]).max() < 1e-12
    assert np.allclose(C.T @ C, np.eye(2), atol=1e-12)

    full = wc.commutator_subalgebra(wc.milnor((1, 1, 1)))
    assert full.shape == (3, 3)


def test_orthonormalize_identity_and_scaling():
    alg = LieAlgebra(np.zeros((2, 2, 2)))
    A = wc.orthonormalize(alg, Metric.identity(2))
    assert np.allclose(A.frame, np.eye(2))

    B = wc.orthonormalize(alg, Metric(4.0 * np.eye(2)))
    assert np.allclose(B.frame, 0.5 * np.eye(2))


def test_orthonormalize_random_spd():
    rng = np.random.default_rng(5)
    for n in (3, 4, 5):
        g = random_spd(rng, n)
        A = random_metric_algebra(rng, n, random_metric=False)
        M = MetricLieAlgebra(A.algebra, Metric(g))
        assert np.abs(M.frame.T @ g @ M.frame - np.eye(n)).max() < 1e-12


def test_orthonormalize_idempotent():
    rng = np.random.default_rng(6)
    for n in (3, 4):
        M = random_metric_algebra(rng, n)
        again = MetricLieAlgebra(LieAlgebra(np.array(M.c)), Metric.identity(n))
        assert np.abs(again.c - M.c).max() < 1e-12


def test_family_jacobi_residuals():
    rng = np.random.default_rng(7)
    for n in (3, 4, 5):
        for _ in range(10):
            M = random_metric_algebra(rng, n)
            assert jacobi_residual(M.c) <= 1e-12


def test_rejects_bad_input():
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0
    c[1, 0, 2] = 1.0  # not antisymmetric
    with pytest.raises(InvalidAlgebraError, match="antisymmetry"):
        LieAlgebra(c)

    c = np.zeros((3, 3, 3))
    # [e0,e1] = e1, [e0,e2] = e2, [e1,e2] = e0 breaks Jacobi
    for (i, j, k) in ((0, 1, 1), (0, 2, 2), (1, 2, 0)):
        c[i, j, k] = 1.0
        c[j, i, k] = -1.0
    assert jacobi_residual(c) > 1.0
    with pytest.raises(InvalidAlgebraError, match="Jacobi"):
        LieAlgebra(c)

    with pytest.raises(ValueError, match="positive definite"):
        Metric(-np.eye(3))

    A = wc.abelian(3)
    with pytest.raises(ValueError, match="length 3"):
        wc.bracket(A, np.ones(2), np.ones(3))


def test_metric_dimension_mismatch():
    alg = LieAlgebra(np.zeros((3, 3, 3)))
    with pytest.raises(ValueError, match="dimension"):
        MetricLieAlgebra(alg, Metric.identity(4))


def test_values_are_immutable():
    A = wc.milnor((1, 1, 1))
    with pytest.raises(ValueError):
        A.c[0, 0, 0] = 1.0
    with pytest.raises(ValueError):
        A.frame[0, 0] = 5.0
