"""Shared generators for randomized tests.

Random algebras are always built from the closed families (and their
direct sums), so the Jacobi identity holds by construction; random SPD
metrics then exercise non-trivial orthonormal frames.
"""

import numpy as np

import weylcurv as wc
from weylcurv.liealg import LieAlgebra, Metric, MetricLieAlgebra


def random_spd(rng, n, spread=1.0):
    A = rng.normal(size=(n, n))
    return spread * (A @ A.T) + (0.5 + spread) * np.eye(n)


def random_orthonormal_pair(rng, n):
    q, _ = np.linalg.qr(rng.normal(size=(n, 2)))
    return q[:, 0], q[:, 1]


def random_unit(rng, n):
    v = rng.normal(size=n)
    return v / np.linalg.norm(v)


def _base_algebra(rng, n) -> MetricLieAlgebra:
    if n == 3:
        if rng.random() < 0.5:
            return wc.milnor(tuple(rng.uniform(-1.5, 1.5, size=3)))
        return wc.solvable(tuple(rng.uniform(-1.5, 1.5, size=2)))
    if n == 4:
        r = rng.random()
        if r < 0.4:
            return wc.solvable(tuple(rng.uniform(-1.5, 1.5, size=3)))
        if r < 0.7:
            return wc.direct_sum(wc.abelian(1), wc.milnor(tuple(rng.uniform(-1.5, 1.5, size=3))))
        a = rng.uniform(0.3, 1.5)
        L = rng.normal(size=(3, 3))
        L = L - L.T
        ext = wc.extension4_check((a, a, a), L)
        assert ext.jacobi_ok
        return ext.algebra
    if n == 5:
        r = rng.random()
        if r < 0.4:
            return wc.solvable(tuple(rng.uniform(-1.5, 1.5, size=4)))
        if r < 0.7:
            return wc.direct_sum(wc.abelian(2), wc.milnor(tuple(rng.uniform(-1.5, 1.5, size=3))))
        return wc.direct_sum(wc.solvable(tuple(rng.uniform(-1.5, 1.5, size=2))), wc.abelian(2))
    raise ValueError(f"no generator for n={n}")


def random_metric_algebra(rng, n, random_metric=True) -> MetricLieAlgebra:
    base = _base_algebra(rng, n)
    if not random_metric:
        return base
    g = random_spd(rng, n, spread=0.6)
    return MetricLieAlgebra(LieAlgebra(np.array(base.algebra.c)), Metric(g))


def random_weyl(rng, n, allow_zero_field=False) -> wc.WeylStructure:
    A = random_metric_algebra(rng, n)
    if allow_zero_field and rng.random() < 0.15:
        E = np.zeros(n)
    else:
        E = rng.normal(size=n)
    gamma = float(rng.uniform(0.3, 2.0))
    return wc.WeylStructure(A, E, gamma)
