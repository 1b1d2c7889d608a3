"""Finite-dimensional metric Lie algebras.

A Lie algebra is stored as its structure tensor c with
[e_i, e_j] = sum_k c[i, j, k] e_k.  Pairing it with a positive definite
Gram matrix gives a :class:`MetricLieAlgebra`; on construction the basis
is orthonormalized (triangular factorization of the Gram matrix) and the
structure constants are re-expressed in that frame.  Every curvature
computation downstream runs in the orthonormal frame.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_TOLS, Tolerances

__all__ = [
    "InvalidAlgebraError",
    "LieAlgebra",
    "Metric",
    "MetricLieAlgebra",
    "abelian",
    "ad",
    "bracket",
    "commutator_subalgebra",
    "is_unimodular",
    "jacobi_residual",
    "orthonormalize",
]


class InvalidAlgebraError(ValueError):
    """Structure constants violate antisymmetry or the Jacobi identity."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


def jacobi_residual(c: np.ndarray) -> float:
    """Max-norm of the Jacobi cyclic sum of a structure tensor."""
    t = np.einsum("ijm,mkl->ijkl", c, c)
    cyc = t + np.einsum("jkil->ijkl", t) + np.einsum("kijl->ijkl", t)
    return float(np.abs(cyc).max()) if c.size else 0.0


class LieAlgebra:
    """Structure constants of a real Lie algebra in a fixed basis."""

    def __init__(self, c: np.ndarray, tols: Tolerances = DEFAULT_TOLS):
        c = np.asarray(c, dtype=float)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise InvalidAlgebraError(f"structure tensor must be (n,n,n), got {c.shape}")
        n = c.shape[0]
        if n < 1:
            raise InvalidAlgebraError("dimension must be at least 1")
        skew = np.abs(c + np.swapaxes(c, 0, 1)).max()
        if skew > 0.0:
            raise InvalidAlgebraError(f"bracket antisymmetry violated (residual {skew:g})")
        jac = jacobi_residual(c)
        if jac > tols.tol_alg:
            raise InvalidAlgebraError(f"Jacobi identity violated (residual {jac:g})")
        self.n = n
        self.c = _freeze(c)
        self.jacobi = jac

    @classmethod
    def from_pairs(cls, n: int, entries, tols: Tolerances = DEFAULT_TOLS) -> "LieAlgebra":
        """Build from sparse (i, j, k, value) entries with i < j.

        The antisymmetric counterparts are filled in automatically, so the
        result is exactly antisymmetric.
        """
        c = np.zeros((n, n, n))
        for i, j, k, v in entries:
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                raise InvalidAlgebraError(f"index out of range in entry ({i},{j},{k})")
            if i == j:
                raise InvalidAlgebraError(f"diagonal bracket entry ({i},{i},{k}) must vanish")
            c[i, j, k] += v
            c[j, i, k] -= v
        return cls(c, tols)


class Metric:
    """Gram matrix of the chosen basis; must be symmetric positive definite."""

    def __init__(self, g: np.ndarray, tols: Tolerances = DEFAULT_TOLS):
        g = np.asarray(g, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"metric must be square, got {g.shape}")
        if np.abs(g - g.T).max() > tols.tol_alg:
            raise ValueError("metric is not symmetric")
        ev_min = float(np.linalg.eigvalsh(g).min())
        if ev_min <= tols.tol_pd:
            raise ValueError(f"metric is not positive definite (min eigenvalue {ev_min:g})")
        self.g = _freeze(0.5 * (g + g.T))

    @classmethod
    def identity(cls, n: int) -> "Metric":
        return cls(np.eye(n))


class MetricLieAlgebra:
    """A Lie algebra with an inner product, expressed in an orthonormal frame.

    Attributes
    ----------
    algebra, metric : the user-facing inputs, kept for I/O
    frame : columns are the orthonormal basis vectors in user coordinates
    c : structure constants in the orthonormal frame; all operations below
        take vectors in orthonormal-frame coordinates
    """

    def __init__(self, algebra: LieAlgebra, metric: Metric | None = None,
                 tols: Tolerances = DEFAULT_TOLS):
        if metric is None:
            metric = Metric.identity(algebra.n)
        if metric.g.shape[0] != algebra.n:
            raise ValueError("metric dimension does not match the algebra")
        self.algebra = algebra
        self.metric = metric
        self.tols = tols
        self.n = algebra.n

        # frame^T g frame = I via the Cholesky factor of g
        chol = np.linalg.cholesky(metric.g)
        frame = np.linalg.inv(chol.T)
        c = np.einsum("ia,jb,ijk,dk->abd", frame, frame, algebra.c,
                      np.linalg.inv(frame), optimize=True)
        # summation-order noise can break exact antisymmetry; restore it
        c = 0.5 * (c - np.swapaxes(c, 0, 1))
        jac = jacobi_residual(c)
        if jac > tols.tol_alg:
            raise InvalidAlgebraError(
                f"Jacobi identity lost in the orthonormal frame (residual {jac:g})")
        self.frame = _freeze(frame)
        self.c = _freeze(c)

        # precomputed so instances are genuinely immutable (thread-safe)
        gam = 0.5 * (c - np.einsum("jki->ijk", c) + np.einsum("kij->ijk", c))
        rm = (np.einsum("jkm,iml->ijkl", gam, gam)
              - np.einsum("ikm,jml->ijkl", gam, gam)
              - np.einsum("ijm,mkl->ijkl", c, gam))
        self._gamma = _freeze(gam)
        self._riemann = _freeze(rm)

    @property
    def gamma(self) -> np.ndarray:
        """Connection coefficients G[i,j,k] = <nabla_{e_i} e_j, e_k>."""
        return self._gamma

    @property
    def riemann(self) -> np.ndarray:
        """Curvature tensor Rm[i,j,k,l] = <R(e_i,e_j) e_k, e_l>."""
        return self._riemann

    def _check_vec(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.n,):
            raise ValueError(f"expected a vector of length {self.n}, got shape {u.shape}")
        return u

    def scaled_metric(self, factor: float) -> "MetricLieAlgebra":
        """The same algebra with the metric multiplied by a positive constant."""
        if factor <= 0:
            raise ValueError("metric scale factor must be positive")
        return MetricLieAlgebra(self.algebra, Metric(factor * self.metric.g), self.tols)


def bracket(A: MetricLieAlgebra, u, v) -> np.ndarray:
    """[u, v] in orthonormal-frame coordinates."""
    u = A._check_vec(u)
    v = A._check_vec(v)
    return np.einsum("i,j,ijk->k", u, v, A.c)


def ad(A: MetricLieAlgebra, u) -> np.ndarray:
    """Matrix of v -> [u, v] in the orthonormal frame."""
    u = A._check_vec(u)
    return np.einsum("i,ijk->kj", u, A.c)


def is_unimodular(A: MetricLieAlgebra) -> tuple[bool, float]:
    """Whether every ad operator is traceless; returns (flag, max residual)."""
    traces = np.einsum("ijj->i", A.c)
    res = float(np.abs(traces).max())
    return res <= A.tols.tol_alg, res


def commutator_subalgebra(A: MetricLieAlgebra) -> np.ndarray:
    """Orthonormal basis (columns) of span{[e_i, e_j]} in the frame."""
    n = A.n
    iu, ju = np.triu_indices(n, 1)
    cols = A.c[iu, ju, :].T  # n x (n choose 2)
    if cols.size == 0 or np.abs(cols).max() == 0.0:
        return np.zeros((n, 0))
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    rank = int(np.sum(s > A.tols.tol_rank))
    return u[:, :rank]


def orthonormalize(algebra: LieAlgebra, metric: Metric | None = None,
                   tols: Tolerances = DEFAULT_TOLS) -> MetricLieAlgebra:
    """Pair an algebra with a metric and move to the orthonormal frame."""
    return MetricLieAlgebra(algebra, metric, tols)


def abelian(n: int, metric: Metric | None = None) -> MetricLieAlgebra:
    """The abelian algebra of dimension n (all brackets vanish)."""
    return MetricLieAlgebra(LieAlgebra(np.zeros((n, n, n))), metric)
