"""Weyl connections on metric Lie algebras: curvature and certification.

A Weyl structure is a metric Lie algebra together with a left-invariant
field E and a stretch factor gamma; the connection is the one of the
1-form dual to gamma*E.  Its sectional curvature in a plane (X, Y) is

    K_weyl = K(X,Y) - |F_perp|^2 - (<nabla_X F, X> + <nabla_Y F, Y>)

with F = gamma*E and F_perp the part of F orthogonal to the plane.  On
the exterior square this is the restriction of a symmetric quadratic form
(the bivector form) to decomposable unit bivectors, which is what the
non-positivity certification works with: a non-positive form certifies
non-positive curvature outright, while a positive value must be realized
on an actual plane to count as a witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple, Optional

import numpy as np
from scipy.stats import norm, qmc

from . import kernels
from .config import DEFAULT_TOLS, Tolerances, default_seed
from .levicivita import householder_complement, nabla_matrix, sectional, sectional_form
from .liealg import MetricLieAlgebra

__all__ = [
    "BivectorForm",
    "Certificate",
    "CertifyConfig",
    "Plane",
    "ScanResult",
    "W1Result",
    "W2Result",
    "W45Result",
    "OWResult",
    "WeylStructure",
    "certify_form",
    "certify_nonpositive",
    "check_W1",
    "check_W2",
    "check_W4_W5",
    "check_snp_sufficient_ow",
    "distance_curvature",
    "pair_table",
    "partial_divergence",
    "reverify",
    "snp_scan",
    "weyl_form",
    "weyl_nabla",
    "weyl_sectional",
]

CERTIFIED = "certified_non_positive"
POSITIVE_WITNESS = "positive_witness"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Plane:
    """An orthonormal pair spanning a tangent plane."""

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        Y = np.asarray(self.Y, dtype=float)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        if X.shape != Y.shape or X.ndim != 1:
            raise ValueError("plane needs two vectors of equal length")
        err = max(abs(X @ X - 1.0), abs(Y @ Y - 1.0), abs(X @ Y))
        if err > DEFAULT_TOLS.tol_alg:
            raise ValueError(f"plane frame is not orthonormal (residual {err:g})")

    @classmethod
    def from_span(cls, u, v) -> "Plane":
        """Orthonormalize a spanning pair (Gram-Schmidt)."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        nu = np.linalg.norm(u)
        if nu == 0.0:
            raise ValueError("first spanning vector vanishes")
        x = u / nu
        w = v - (x @ v) * x
        nw = np.linalg.norm(w)
        if nw < 1e-12:
            raise ValueError("spanning vectors are collinear")
        return cls(x, w / nw)


@dataclass(frozen=True)
class WeylStructure:
    """Metric Lie algebra + defining field E + stretch factor gamma.

    The connection is the one of gamma*E; E = 0 gives the Levi-Civita
    baseline.  Coordinates of E are in the orthonormal frame.
    """

    space: MetricLieAlgebra
    E: np.ndarray
    gamma: float = 1.0

    def __post_init__(self):
        E = np.asarray(self.E, dtype=float)
        object.__setattr__(self, "E", E)
        self.space._check_vec(E)
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")

    @property
    def effective_field(self) -> np.ndarray:
        return self.gamma * self.E

    def unit_field(self) -> np.ndarray:
        nrm = float(np.linalg.norm(self.E))
        if nrm == 0.0:
            raise ValueError("the defining field vanishes")
        return self.E / nrm

    def with_gamma(self, gamma: float) -> "WeylStructure":
        return WeylStructure(self.space, self.E, gamma)


def weyl_nabla(W: WeylStructure, X, Y) -> np.ndarray:
    """Covariant derivative of the Weyl connection on left-invariant fields."""
    A = W.space
    X = A._check_vec(X)
    Y = A._check_vec(Y)
    F = W.effective_field
    base = np.einsum("i,j,ijk->k", X, Y, A.gamma)
    return base + (F @ Y) * X + (F @ X) * Y - (X @ Y) * F


def partial_divergence(W: WeylStructure, plane: Plane) -> float:
    """Trace of Y -> nabla_Y (gamma E) over the plane's frame."""
    A = W.space
    M = nabla_matrix(A, W.effective_field)
    return float(plane.X @ M @ plane.X + plane.Y @ M @ plane.Y)


def weyl_sectional(W: WeylStructure, plane: Plane) -> float:
    """Sectional curvature of the Weyl connection in an orthonormal plane."""
    A = W.space
    F = W.effective_field
    K = sectional(A, plane)
    fperp = F - (F @ plane.X) * plane.X - (F @ plane.Y) * plane.Y
    return K - float(fperp @ fperp) - partial_divergence(W, plane)


def distance_curvature(W: WeylStructure, X, Y) -> float:
    """Exterior derivative of the dual 1-form: dphi(X,Y) = -<gamma E, [X,Y]>."""
    A = W.space
    X = A._check_vec(X)
    Y = A._check_vec(Y)
    return float(-W.effective_field @ np.einsum("i,j,ijk->k", X, Y, A.c))


# -- the bivector form -------------------------------------------------


def pair_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Lexicographic (i < j) index pair arrays for the exterior square."""
    iu, ju = np.triu_indices(n, 1)
    return iu.astype(np.int64), ju.astype(np.int64)


@dataclass(frozen=True)
class BivectorForm:
    """Symmetric quadratic form on the exterior square.

    Indexed by lexicographic pairs (i < j); on the Plucker coordinates of
    an orthonormal plane it evaluates to the Weyl sectional curvature of
    that plane.
    """

    n: int
    Q: np.ndarray

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=float)
        N = self.n * (self.n - 1) // 2
        if Q.shape != (N, N):
            raise ValueError(f"form must be {N}x{N} for n={self.n}, got {Q.shape}")
        if N and np.abs(Q - Q.T).max() > 1e-12:
            raise ValueError("bivector form must be symmetric")
        object.__setattr__(self, "Q", 0.5 * (Q + Q.T))

    @property
    def N(self) -> int:
        return self.n * (self.n - 1) // 2

    def plucker(self, X, Y) -> np.ndarray:
        pi, pj = pair_table(self.n)
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        return X[pi] * Y[pj] - X[pj] * Y[pi]

    def evaluate(self, X, Y) -> float:
        m = self.plucker(X, Y)
        return float(m @ self.Q @ m)

    def lambda_max(self) -> float:
        return float(np.linalg.eigvalsh(self.Q).max()) if self.N else 0.0


def weyl_form(W: WeylStructure) -> BivectorForm:
    """Assemble the bivector form of a Weyl structure.

    Three pieces: the curvature form of the metric connection, the form
    realizing the partial divergence (built from the symmetrized
    derivative of gamma*E), and the Gram-determinant form realizing the
    squared orthogonal component of gamma*E via wedging into the third
    exterior power.
    """
    A = W.space
    n = A.n
    F = W.effective_field
    I0, I1 = pair_table(n)

    rm = A.riemann
    Q_R = -rm[I0[:, None], I1[:, None], I0[None, :], I1[None, :]]

    M = nabla_matrix(A, F)
    D = 0.5 * (M + M.T)
    delta = np.eye(n)
    Q_div = (D[np.ix_(I0, I0)] * delta[np.ix_(I1, I1)]
             - D[np.ix_(I1, I0)] * delta[np.ix_(I0, I1)]
             + delta[np.ix_(I0, I0)] * D[np.ix_(I1, I1)]
             - delta[np.ix_(I1, I0)] * D[np.ix_(I0, I1)])

    N = I0.size
    pidx = {(int(i), int(j)): p for p, (i, j) in enumerate(zip(I0, I1))}
    triples = list(combinations(range(n), 3))
    wedge = np.zeros((len(triples), N))
    for t, (i, j, k) in enumerate(triples):
        wedge[t, pidx[(j, k)]] = F[i]
        wedge[t, pidx[(i, k)]] = -F[j]
        wedge[t, pidx[(i, j)]] = F[k]
    Q_perp = wedge.T @ wedge

    Q = Q_R - Q_div - Q_perp
    return BivectorForm(n, 0.5 * (Q + Q.T))


# -- certification ------------------------------------------------------


@dataclass(frozen=True)
class CertifyConfig:
    tol_cert: float = DEFAULT_TOLS.tol_cert
    starts: int = 64
    max_iter: int = 500
    gtol: float = 1e-11
    seed: Optional[int] = None

    def resolved_seed(self) -> int:
        return default_seed() if self.seed is None else self.seed


DEFAULT_CERTIFY = CertifyConfig()


@dataclass(frozen=True)
class Certificate:
    """Outcome of a non-positivity check.

    verdict is one of certified_non_positive / positive_witness /
    inconclusive; method records how it was reached (exact_3d when every
    bivector is decomposable, eigen_sufficient when the full form is
    non-positive, witness_search otherwise).  lambda_max always refers to
    the bivector form; for n <= 3 it equals the true maximum over planes.
    """

    verdict: str
    method: str
    lambda_max: float
    tol_cert: float
    gamma: float
    witness: Optional[Plane] = None
    witness_value: Optional[float] = None
    best_found: Optional[float] = None
    note: str = ""

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED


def _start_frames(n: int, count: int, seed: int) -> np.ndarray:
    """Deterministic ascent starts: coordinate planes, then a scrambled
    Halton fill mapped through the normal quantile."""
    frames = []
    for i in range(n):
        for j in range(i + 1, n):
            V = np.zeros((n, 2))
            V[i, 0] = 1.0
            V[j, 1] = 1.0
            frames.append(V)
            if len(frames) >= count:
                return np.array(frames[:count])
    missing = count - len(frames)
    if missing > 0:
        halton = qmc.Halton(d=2 * n, scramble=True, seed=seed)
        pts = np.clip(halton.random(missing), 1e-12, 1.0 - 1e-12)
        frames.extend(norm.ppf(pts).reshape(missing, n, 2))
    return np.array(frames[:count])


def _plane_from_bivector3(m: np.ndarray) -> Plane:
    # in three dimensions a bivector is dual to an axis; the plane is its
    # orthogonal complement
    axis = np.array([m[2], -m[1], m[0]])
    axis = axis / np.linalg.norm(axis)
    comp = householder_complement(axis)
    return Plane(comp[:, 0], comp[:, 1])


def certify_form(form: BivectorForm, config: CertifyConfig = DEFAULT_CERTIFY,
                 gamma: float = 1.0) -> Certificate:
    """Certify sign of a bivector form over orthonormal planes.

    For n <= 3 every unit bivector is decomposable and the top eigenvalue
    settles the question.  For n >= 4 a non-positive spectrum is
    sufficient; otherwise a multi-start projected ascent over orthonormal
    2-frames looks for a decomposable witness, and failing that the result
    is inconclusive (the form may still be non-positive on planes).
    """
    n = form.n
    lam = form.lambda_max()
    tol = config.tol_cert
    if n <= 3:
        if lam <= tol:
            return Certificate(CERTIFIED, "exact_3d", lam, tol, gamma)
        evals, evecs = np.linalg.eigh(form.Q)
        witness = _plane_from_bivector3(evecs[:, -1]) if n == 3 else Plane(
            np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        val = form.evaluate(witness.X, witness.Y)
        return Certificate(POSITIVE_WITNESS, "exact_3d", lam, tol, gamma,
                           witness=witness, witness_value=float(val))
    if lam <= tol:
        return Certificate(CERTIFIED, "eigen_sufficient", lam, tol, gamma)
    pi, pj = pair_table(n)
    starts = _start_frames(n, config.starts, config.resolved_seed())
    best_val, best_V = kernels.ascend_pairs(
        np.ascontiguousarray(form.Q), pi, pj, np.ascontiguousarray(starts),
        config.max_iter, config.gtol, 10.0 * tol)
    if not np.isfinite(best_val):
        return Certificate(INCONCLUSIVE, "witness_search", lam, tol, gamma,
                           best_found=None, note="ascent failed to produce a frame")
    if best_val > tol:
        witness = Plane(best_V[:, 0], best_V[:, 1])
        val = form.evaluate(witness.X, witness.Y)
        return Certificate(POSITIVE_WITNESS, "witness_search", lam, tol, gamma,
                           witness=witness, witness_value=float(val),
                           best_found=float(best_val))
    return Certificate(INCONCLUSIVE, "witness_search", lam, tol, gamma,
                       best_found=float(best_val),
                       note="form is indefinite but no decomposable witness found")


def certify_nonpositive(W: WeylStructure,
                        config: CertifyConfig = DEFAULT_CERTIFY) -> Certificate:
    """Certify the sign of all Weyl sectional curvatures of W."""
    return certify_form(weyl_form(W), config, gamma=W.gamma)


def reverify(W: WeylStructure, cert: Certificate) -> bool:
    """Re-check the evidence recorded in a certificate against W."""
    form = weyl_form(W)
    lam = form.lambda_max()
    if abs(lam - cert.lambda_max) > 1e-7 * max(1.0, abs(lam)):
        return False
    if cert.verdict == CERTIFIED:
        return lam <= cert.tol_cert
    if cert.verdict == POSITIVE_WITNESS:
        if cert.witness is None:
            return False
        return weyl_sectional(W, cert.witness) > cert.tol_cert
    return True


# -- the (W1)-(W5) conditions and stretched non-positivity --------------


class W1Result(NamedTuple):
    ok: bool
    worst: float


class W2Result(NamedTuple):
    ok: bool
    residual: float


class OWResult(NamedTuple):
    ok: bool
    min_eigenvalue: float


class W45Result(NamedTuple):
    w4: bool
    w5: bool
    sup_value: float
    worst_pair: Plane
    decoupled_bound: float


def check_W1(W: WeylStructure, tol_cert: float = DEFAULT_TOLS.tol_cert) -> W1Result:
    """K(plane) <= 0 for every plane containing E (exact eigen test)."""
    A = W.space
    X = W.unit_field()
    P = householder_complement(X)
    S = P.T @ sectional_form(A, X) @ P
    worst = float(np.linalg.eigvalsh(S).max())
    return W1Result(worst <= tol_cert, worst)


def _sym_derivative_on_complement(W: WeylStructure) -> tuple[np.ndarray, np.ndarray]:
    A = W.space
    X = W.unit_field()
    P = householder_complement(X)
    M = nabla_matrix(A, X)
    D = 0.5 * (M + M.T)
    return P, P.T @ D @ P


def check_W2(W: WeylStructure) -> W2Result:
    """<nabla_Y E, Y> = 0 for every Y orthogonal to E."""
    _, Dr = _sym_derivative_on_complement(W)
    res = float(np.abs(np.linalg.eigvalsh(Dr)).max()) if Dr.size else 0.0
    return W2Result(res <= W.space.tols.tol_alg, res)


def check_snp_sufficient_ow(W: WeylStructure,
                            tol_cert: float = DEFAULT_TOLS.tol_cert) -> OWResult:
    """Strict expansion test: <nabla_Y E, Y> > 0 for every Y orthogonal to E."""
    _, Dr = _sym_derivative_on_complement(W)
    lam_min = float(np.linalg.eigvalsh(Dr).min()) if Dr.size else 0.0
    return OWResult(lam_min > tol_cert, lam_min)


def check_W4_W5(W: WeylStructure, tol_cert: float = DEFAULT_TOLS.tol_cert) -> W45Result:
    """Discriminant conditions over orthonormal pairs orthogonal to E.

    Evaluates sup over orthonormal (Y1, Y2) in the complement of E of

        <nabla_E E, Y1>^2 + 4 K(E, Y2).

    The condition holds with <= 0 (w4) or strictly < 0 (w5).  Maximizing
    over Y1 first reduces the sup to |u|^2 + lambda_max(4 S - u u^T) with
    u the complement part of nabla_E E and S the curvature form of planes
    through E, so the value is exact.  The decoupled bound
    |u|^2 + 4 lambda_max(S) (which drops the Y1 ⊥ Y2 constraint) is
    reported alongside.
    """
    A = W.space
    if A.n < 3:
        raise ValueError("the frame conditions need dimension at least 3")
    X = W.unit_field()
    P = householder_complement(X)
    u_full = np.einsum("i,j,ijk->k", X, X, A.gamma)
    u = P.T @ u_full
    S = P.T @ sectional_form(A, X) @ P
    M4 = 4.0 * S - np.outer(u, u)
    evals, evecs = np.linalg.eigh(M4)
    uu = float(u @ u)
    sup = uu + float(evals[-1])
    decoupled = uu + 4.0 * float(np.linalg.eigvalsh(S).max())

    w2vec = evecs[:, -1]
    r = u - (u @ w2vec) * w2vec
    if np.linalg.norm(r) > 1e-12:
        y1 = r / np.linalg.norm(r)
    else:
        comp2 = householder_complement(w2vec)
        y1 = comp2[:, 0]
    worst = Plane(P @ y1, P @ w2vec)
    return W45Result(sup <= tol_cert, sup < -tol_cert, sup, worst, decoupled)


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a stretched non-positivity scan over a gamma grid."""

    gammas: np.ndarray
    certificates: list
    gamma0: Optional[float]
    inconclusive: list = field(default_factory=list)

    def entries(self):
        return list(zip(self.gammas, self.certificates))


def snp_scan(W: WeylStructure, gamma_grid,
             config: CertifyConfig = DEFAULT_CERTIFY) -> ScanResult:
    """Certify the Weyl connections of gamma*E over a grid of gamma values.

    gamma0 is the smallest grid value from which every larger grid value
    certifies (None when the largest gamma does not certify).
    Inconclusive entries are listed separately and break certified runs.
    """
    grid = np.asarray(gamma_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("gamma grid is empty")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("gamma grid must be positive and strictly increasing")
    certs = [certify_nonpositive(W.with_gamma(float(g)), config) for g in grid]
    inconclusive = [float(g) for g, c in zip(grid, certs) if c.verdict == INCONCLUSIVE]
    gamma0 = None
    for g, c in zip(grid[::-1], certs[::-1]):
        if c.verdict == CERTIFIED:
            gamma0 = float(g)
        else:
            break
    return ScanResult(grid, certs, gamma0, inconclusive)
