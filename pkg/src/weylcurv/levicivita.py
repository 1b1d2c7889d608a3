"""Levi-Civita connection and curvature of left-invariant metrics.

All operations work on orthonormal-frame coordinates of a
:class:`~weylcurv.liealg.MetricLieAlgebra` and are purely algebraic in the
structure constants: the connection comes from the Koszul formula

    <nabla_X Y, Z> = (1/2)(<[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>)

and the curvature operator is R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X
- nabla_[X,Y], evaluated by composition of the constant coefficient maps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .liealg import MetricLieAlgebra, ad, commutator_subalgebra

__all__ = [
    "FieldClass",
    "check_parallel_consequence",
    "classify_field",
    "curvature",
    "divergence",
    "householder_complement",
    "nabla",
    "nabla_matrix",
    "ricci",
    "sectional",
    "sectional_form",
]


def nabla(A: MetricLieAlgebra, X, Y) -> np.ndarray:
    """Covariant derivative nabla_X Y of left-invariant fields."""
    X = A._check_vec(X)
    Y = A._check_vec(Y)
    return np.einsum("i,j,ijk->k", X, Y, A.gamma)


def curvature(A: MetricLieAlgebra, X, Y, Z) -> np.ndarray:
    """Curvature operator R(X,Y)Z."""
    X = A._check_vec(X)
    Y = A._check_vec(Y)
    Z = A._check_vec(Z)
    return np.einsum("i,j,k,ijkl->l", X, Y, Z, A.riemann)


def _check_plane(A: MetricLieAlgebra, X, Y, tol: float) -> tuple[np.ndarray, np.ndarray]:
    X = A._check_vec(X)
    Y = A._check_vec(Y)
    err = max(abs(X @ X - 1.0), abs(Y @ Y - 1.0), abs(X @ Y))
    if err > tol:
        raise ValueError(f"plane frame is not orthonormal (residual {err:g})")
    return X, Y


def sectional(A: MetricLieAlgebra, plane) -> float:
    """Sectional curvature <R(Y,X)X, Y> of an orthonormal plane.

    ``plane`` is anything with attributes X, Y or a pair of vectors.
    """
    X, Y = _plane_vectors(plane)
    X, Y = _check_plane(A, X, Y, A.tols.tol_alg)
    return float(np.einsum("i,j,k,l,ijkl->", Y, X, X, Y, A.riemann))


def _plane_vectors(plane):
    if hasattr(plane, "X") and hasattr(plane, "Y"):
        return plane.X, plane.Y
    X, Y = plane
    return X, Y


def sectional_form(A: MetricLieAlgebra, X) -> np.ndarray:
    """Matrix S[a,b] = <R(e_a, X)X, e_b>: K(X, v) = v^T S v for unit v ⊥ X."""
    X = A._check_vec(X)
    S = np.einsum("j,k,ijkl->il", X, X, A.riemann)
    return 0.5 * (S + S.T)


def householder_complement(X: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis (columns) of the complement of unit X."""
    n = X.size
    s = 1.0 if X[0] >= 0 else -1.0
    u = X.copy()
    u[0] += s
    H = np.eye(n) - 2.0 * np.outer(u, u) / (u @ u)
    # H e_0 = -s X, so the remaining columns span the complement of X
    return H[:, 1:]


def ricci(A: MetricLieAlgebra, X) -> float:
    """Ricci curvature of a unit direction, summed over a completed frame."""
    X = A._check_vec(X)
    nrm = float(np.linalg.norm(X))
    if nrm == 0.0:
        raise ValueError("Ricci curvature needs a nonzero direction")
    if abs(nrm - 1.0) > A.tols.tol_alg:
        raise ValueError(f"direction must be a unit vector (|X| = {nrm:g})")
    P = householder_complement(X)
    S = sectional_form(A, X)
    return float(np.einsum("ia,ij,ja->", P, S, P))


def divergence(A: MetricLieAlgebra, E) -> float:
    """Divergence of a left-invariant field: -trace(ad_E)."""
    E = A._check_vec(E)
    return float(-np.trace(ad(A, E)))


def nabla_matrix(A: MetricLieAlgebra, E) -> np.ndarray:
    """Matrix of the map Y -> nabla_Y E (column j is nabla_{e_j} E)."""
    E = A._check_vec(E)
    return np.einsum("jik,i->kj", A.gamma, E)


@dataclass(frozen=True)
class FieldClass:
    """Classification of a left-invariant field."""

    is_killing: bool
    is_parallel: bool
    is_closed_form: bool
    nabla_E: np.ndarray
    killing_residual: float
    commutator_residual: float


def classify_field(A: MetricLieAlgebra, E) -> FieldClass:
    """Killing / parallel / closed-form tests for a left-invariant field.

    E is Killing iff ad_E is skew; parallel iff additionally E is orthogonal
    to the commutator subalgebra; the dual 1-form is closed iff E is
    orthogonal to the commutator subalgebra.
    """
    E = A._check_vec(E)
    if np.linalg.norm(E) == 0.0:
        raise ValueError("cannot classify the zero field")
    adE = ad(A, E)
    kill_res = float(np.abs(adE + adE.T).max())
    comm = commutator_subalgebra(A)
    comm_res = float(np.abs(comm.T @ E).max()) if comm.shape[1] else 0.0
    tol = A.tols.tol_alg
    is_killing = kill_res <= tol
    is_closed = comm_res <= tol
    return FieldClass(
        is_killing=is_killing,
        is_parallel=is_killing and is_closed,
        is_closed_form=is_closed,
        nabla_E=nabla_matrix(A, E),
        killing_residual=kill_res,
        commutator_residual=comm_res,
    )


def check_parallel_consequence(A: MetricLieAlgebra, E) -> bool:
    """For a parallel field, verify R(X, E) = 0 for every X."""
    E = A._check_vec(E)
    cls = classify_field(A, E)
    if not cls.is_parallel:
        raise ValueError("field is not parallel; classify_field first")
    contracted = np.einsum("ijkl,j->ikl", A.riemann, E)
    return float(np.abs(contracted).max()) <= A.tols.tol_alg
