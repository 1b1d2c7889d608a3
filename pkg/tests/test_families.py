import numpy as np
import pytest

import weylcurv as wc
from weylcurv.families import SolvableFamily, _axis_coefficients
from weylcurv.levicivita import classify_field
from weylcurv.weyl import CERTIFIED, POSITIVE_WITNESS

from helpers import random_orthonormal_pair, random_unit

E3 = np.eye(3)
E4 = np.eye(4)


def test_milnor_basic():
    A = wc.milnor((0, 0, 0))
    assert np.abs(A.c).max() == 0.0

    sol = wc.milnor((1, -1, 0))
    ok, _ = wc.is_unimodular(sol)
    assert ok

    flat = wc.milnor((2, 2, 0))
    assert classify_field(flat, E3[2]).is_parallel


def test_solvable_basic():
    S = wc.solvable((1, 2, 3))
    ok, _ = wc.is_unimodular(S)
    assert not ok
    rng = np.random.default_rng(0)
    for _ in range(10):
        assert wc.ricci(S, random_unit(rng, 4)) < 0.0

    H = wc.hyperbolic(3)
    for _ in range(5):
        X, Y = random_orthonormal_pair(rng, 4)
        assert wc.sectional(H, wc.Plane(X, Y)) == pytest.approx(-1.0, abs=1e-12)


def test_solvable_sorts_and_records_permutation():
    f = SolvableFamily((3.0, 1.0, 2.0))
    assert f.mu == (1.0, 2.0, 3.0)
    assert f.permutation == (1, 2, 0)


def test_sol_constructors_are_isometric():
    """The skew 3-frame and the diagonalized constructions of the same
    solvable group produce equal curvature under the basis rotation."""
    M = wc.milnor((1, -1, 0))
    S = wc.solvable((1, -1))  # sorted to (-1, 1): basis (b, u-, u+)
    s = 1 / np.sqrt(2)
    # milnor basis -> solvable basis: e3 -> b, (e1 +- e2)/sqrt2 -> u-/u+
    R = np.array([[0.0, s, s],
                  [0.0, s, -s],
                  [1.0, 0.0, 0.0]])  # columns: images of (b, u-, u+)
    rng = np.random.default_rng(1)
    for _ in range(20):
        X, Y = random_orthonormal_pair(rng, 3)
        kS = wc.sectional(S, wc.Plane(X, Y))
        kM = wc.sectional(M, wc.Plane(R @ X, R @ Y))
        assert kM == pytest.approx(kS, abs=1e-10)


def test_axis_classifier_cases():
    v = wc.classify_axis_field((1, -1), -1.0)
    assert v.non_positive

    v = wc.classify_axis_field((1, 2, 3), 1.0)
    assert v.non_positive
    v = wc.classify_axis_field((1, 2, 3), 1.5)
    assert not v.non_positive
    assert v.worst_value == pytest.approx(0.75)  # -(alpha-mu_1)(alpha-mu_3)
    assert v.worst_pair == (1, 3)

    v = wc.classify_axis_field((-2, -1, 1), -1.0)
    assert not v.non_positive

    with pytest.raises(ValueError, match="nonzero"):
        wc.classify_axis_field((0.0, 1.0), 0.5)


def test_axis_classifier_matches_certifier():
    rng = np.random.default_rng(2)
    for mu in ((1.0, 2.0), (1.0, -1.0), (-2.0, -1.0, 1.0)):
        f = SolvableFamily(mu)
        S = wc.solvable(f)
        lo, hi = f.mu[0] - 1.0, f.mu[-1] + 1.0
        for alpha in rng.uniform(lo, hi, size=12):
            if abs(alpha) < 1e-3:
                continue
            verdict = wc.classify_axis_field(f, alpha)
            E = np.zeros(f.n + 1)
            E[0] = alpha
            cert = wc.certify_nonpositive(wc.WeylStructure(S, E, 1.0))
            assert cert.verdict != "inconclusive"
            assert verdict.non_positive == (cert.verdict == CERTIFIED), (mu, alpha)


def test_general_field_classifier():
    # forced form fails off the axis
    f = SolvableFamily((-1.0, 1.0))
    v = wc.classify_general_field(f, np.array([1.0, 0.0, 0.2]))
    assert v.alpha0_window_ok
    assert v.forced_case == "upper"
    assert v.forced_form_ok is False
    assert v.failed_condition is not None

    # window satisfied, no forcing in the one-sided regime
    f = SolvableFamily((1.0, 2.0, 3.0))
    v = wc.classify_general_field(f, np.array([0.5, 1.0, 0.0, 0.0]))
    assert v.alpha0_window_ok
    assert v.forced_case is None and v.failed_condition is None

    # window violated
    f = SolvableFamily((-1.0, 1.0))
    v = wc.classify_general_field(f, np.array([0.0, 1.0, 0.0]))
    assert not v.alpha0_window_ok
    assert v.failed_condition is not None

    # the exact forced form passes
    v = wc.classify_general_field(f, np.array([1.0, 0.0, 0.0]))
    assert v.alpha0_window_ok and v.forced_form_ok


def test_eigenvector_snp_thresholds():
    r = wc.eigenvector_snp((1.0, 3.0), 2)
    assert r["necessary"] and r["sufficient"]
    assert r["witness_value"] == pytest.approx(3.0)

    r = wc.eigenvector_snp((1.0, 4.0), 2)
    assert r["necessary"] and not r["sufficient"]

    r = wc.eigenvector_snp((1.0, 5.0), 2)
    assert not r["necessary"] and not r["sufficient"]

    with pytest.raises(ValueError, match="positive"):
        wc.eigenvector_snp((-1.0, 2.0), 1)
    with pytest.raises(ValueError, match="k must be"):
        wc.eigenvector_snp((1.0, 2.0), 3)


def test_direct_sum_products():
    P = wc.direct_sum(wc.abelian(1), wc.milnor((1, 1, 1)))
    assert P.n == 4
    E = E4[0]
    assert classify_field(P, E).is_parallel

    T = wc.direct_sum(wc.abelian(1), wc.abelian(3))
    scan = wc.snp_scan(wc.WeylStructure(T, E4[0], 1.0), np.linspace(0.2, 2.0, 5))
    assert scan.gamma0 == pytest.approx(0.2)

    HP = wc.direct_sum(wc.abelian(1), wc.solvable((1.0,)))
    assert classify_field(HP, np.eye(3)[0]).is_parallel
    scan = wc.snp_scan(wc.WeylStructure(HP, np.eye(3)[0], 1.0),
                       np.linspace(0.2, 2.0, 5))
    assert scan.gamma0 == pytest.approx(0.2)


def test_direct_sum_mixed_metrics():
    g = np.array([[2.0, 0.3], [0.3, 1.0]])
    A = wc.MetricLieAlgebra(wc.LieAlgebra(np.zeros((2, 2, 2))), wc.Metric(g))
    P = wc.direct_sum(A, wc.milnor((1, -1, 0)))
    assert P.n == 5
    assert np.abs(P.metric.g[:2, :2] - g).max() == 0.0


def test_extension4_check():
    # wholly anti-symmetric L on the round triple: valid and unimodular
    L = np.array([[0.0, 1.0, -0.5], [-1.0, 0.0, 0.3], [0.5, -0.3, 0.0]])
    r = wc.extension4_check((1, 1, 1), L)
    assert r.jacobi_ok and r.unimodular and r.l_lambda_antisymmetric
    cls = classify_field(r.algebra, np.eye(4)[0])
    assert cls.is_parallel

    r = wc.extension4_check((1, 1, 1), np.zeros((3, 3)))
    assert r.jacobi_ok and r.unimodular

    # with all coefficients nonzero, L Lambda anti-symmetry is exactly the
    # Jacobi constraint
    lam = (1.0, 2.0, 3.0)
    Asym = np.array([[0.0, 1.0, 0.4], [-1.0, 0.0, -0.2], [-0.4, 0.2, 0.0]])
    L = Asym @ np.linalg.inv(np.diag(lam))
    r = wc.extension4_check(lam, L)
    assert r.l_lambda_antisymmetric and r.jacobi_ok and r.unimodular

    # breaking anti-symmetry breaks Jacobi
    r = wc.extension4_check(lam, L + 0.1 * np.eye(3))
    assert not r.jacobi_ok and r.algebra is None

    # degenerate triple: L Lambda anti-symmetry alone is not enough
    r = wc.extension4_check((1.0, -1.0, 0.0), np.diag([0.0, 0.0, 1.0]))
    assert r.l_lambda_antisymmetric and not r.jacobi_ok


def test_flat_milnor_pair_cases():
    # rotation in the plane of the two equal coefficients keeps b parallel
    a = 0.8
    L = np.array([[0.0, a, 0.0], [-a, 0.0, 0.0], [0.0, 0.0, 0.0]])
    r = wc.extension4_check((1.0, 1.0, 2.0), L)
    assert r.jacobi_ok and r.unimodular
    assert classify_field(r.algebra, np.eye(4)[0]).is_parallel


def test_sol_isolation():
    M = wc.milnor((1, -1, 0))
    rng = np.random.default_rng(3)
    for eps in (0.05, 0.1):
        for _ in range(5):
            u = rng.normal(size=3)
            u[2] = 0.0
            u /= np.linalg.norm(u)
            cert = wc.certify_nonpositive(wc.WeylStructure(M, E3[2] + eps * u, 1.0))
            assert cert.verdict == POSITIVE_WITNESS


def test_stretch_difference_formula():
    # the gap between the Weyl and metric sectional curvatures on a
    # solvable family has a closed form in (L, E, gamma)
    rng = np.random.default_rng(4)
    for _ in range(20):
        nmu = int(rng.integers(2, 5))
        mu = np.sort(rng.uniform(-2, 2, size=nmu))
        S = wc.solvable(tuple(mu))
        n = nmu + 1
        L = np.diag(np.concatenate([[0.0], mu]))
        Et = random_unit(rng, n)
        gamma = float(rng.uniform(0.2, 2.0))
        W = wc.WeylStructure(S, Et, gamma)
        X, Y = random_orthonormal_pair(rng, n)
        plane = wc.Plane(X, Y)
        diff = wc.weyl_sectional(W, plane) - wc.sectional(S, plane)
        eta0 = Et[0]
        expected = (gamma * (eta0 * (X @ L @ X + Y @ L @ Y)
                             - X[0] * (X @ L @ Et) - Y[0] * (Y @ L @ Et))
                    - gamma ** 2 * (1.0 - (X @ Et) ** 2 - (Y @ Et) ** 2))
        assert diff == pytest.approx(expected, abs=1e-10)


def test_axis_coefficients_match_form_diagonal():
    mu = (0.7, 1.9, 3.2)
    alpha = 1.3
    S = wc.solvable(mu)
    E = np.zeros(4)
    E[0] = 1.0
    Q = wc.weyl_form(wc.WeylStructure(S, E, alpha)).Q
    coeffs = dict(_axis_coefficients(mu, alpha))
    from weylcurv.weyl import pair_table
    pi, pj = pair_table(4)
    for p, (i, j) in enumerate(zip(pi, pj)):
        assert Q[p, p] == pytest.approx(coeffs[(i, j)], abs=1e-12)
