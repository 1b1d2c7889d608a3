"""Explicit families: Milnor triples, solvable extensions, products.

These constructors produce :class:`MetricLieAlgebra` instances whose
curvature is known in closed form, plus classifiers implementing the
closed-form non-positivity criteria for axis and general fields on the
solvable extensions of abelian algebras.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DEFAULT_TOLS
from .liealg import (InvalidAlgebraError, LieAlgebra, Metric, MetricLieAlgebra,
                     is_unimodular, jacobi_residual)

__all__ = [
    "AxisVerdict",
    "ExtensionCheck",
    "GeneralFieldVerdict",
    "MilnorTriple",
    "SolvableFamily",
    "abelian",
    "classify_axis_field",
    "classify_general_field",
    "direct_sum",
    "eigenvector_snp",
    "extension4_check",
    "hyperbolic",
    "milnor",
    "solvable",
]

from .liealg import abelian  # re-exported: the degenerate member of every family


@dataclass(frozen=True)
class MilnorTriple:
    """Bracket coefficients of a 3-dimensional unimodular algebra:
    [e2,e3] = l1 e1, [e3,e1] = l2 e2, [e1,e2] = l3 e3 (indices 1-based)."""

    l1: float
    l2: float
    l3: float


def milnor(t: MilnorTriple | tuple) -> MetricLieAlgebra:
    """3-dimensional unimodular algebra of a Milnor triple, identity metric."""
    if not isinstance(t, MilnorTriple):
        t = MilnorTriple(*t)
    c = np.zeros((3, 3, 3))
    for (i, j, k), lam in (((1, 2, 0), t.l1), ((2, 0, 1), t.l2), ((0, 1, 2), t.l3)):
        c[i, j, k] = lam
        c[j, i, k] = -lam
    return MetricLieAlgebra(LieAlgebra(c))


@dataclass(frozen=True)
class SolvableFamily:
    """Eigenvalues of the symmetric derivation of a solvable extension.

    mu is stored sorted ascending; permutation maps sorted positions back
    to the order the user supplied.  Index 0 of the built algebra is the
    extension direction b with [b, e_i] = mu_i e_i.
    """

    mu: tuple
    permutation: tuple

    def __init__(self, mu):
        mu = tuple(float(m) for m in mu)
        if len(mu) < 1:
            raise ValueError("need at least one eigenvalue")
        order = tuple(int(i) for i in np.argsort(mu, kind="stable"))
        object.__setattr__(self, "mu", tuple(mu[i] for i in order))
        object.__setattr__(self, "permutation", order)

    @property
    def n(self) -> int:
        return len(self.mu)

    def require_nonzero(self):
        if any(m == 0.0 for m in self.mu):
            raise ValueError(
                "classifier assumes all eigenvalues nonzero; got mu = %s" % (self.mu,))


def _as_family(f) -> SolvableFamily:
    return f if isinstance(f, SolvableFamily) else SolvableFamily(f)


def solvable(f: SolvableFamily | tuple) -> MetricLieAlgebra:
    """(n+1)-dimensional extension of the abelian algebra by a symmetric
    derivation with eigenvalues mu; identity metric, b at index 0."""
    f = _as_family(f)
    n = f.n
    c = np.zeros((n + 1, n + 1, n + 1))
    for i, m in enumerate(f.mu, start=1):
        c[0, i, i] = m
        c[i, 0, i] = -m
    return MetricLieAlgebra(LieAlgebra(c))


def hyperbolic(n: int) -> MetricLieAlgebra:
    """Model of (n+1)-dimensional hyperbolic space (identity derivation)."""
    return solvable((1.0,) * n)


@dataclass(frozen=True)
class AxisVerdict:
    """Closed-form non-positivity verdict for an axis field alpha*b."""

    non_positive: bool
    reason: str
    worst_value: float
    worst_pair: tuple


def _axis_coefficients(mu, alpha):
    """Diagonal bivector-form coefficients for E = alpha*b: mu_k(alpha-mu_k)
    on the (0,k) pairs and -(alpha-mu_i)(alpha-mu_j) on the (i,j) pairs."""
    n = len(mu)
    coeffs = []
    for k in range(1, n + 1):
        coeffs.append(((0, k), mu[k - 1] * (alpha - mu[k - 1])))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            coeffs.append(((i, j), -(alpha - mu[i - 1]) * (alpha - mu[j - 1])))
    return coeffs


def classify_axis_field(f, alpha: float,
                        tol: float = DEFAULT_TOLS.tol_cert) -> AxisVerdict:
    """Non-positivity of the connection of alpha*b on a solvable extension.

    Exact criterion: every diagonal coefficient of the bivector form must
    be non-positive.  Requires all eigenvalues nonzero.
    """
    f = _as_family(f)
    f.require_nonzero()
    coeffs = _axis_coefficients(f.mu, float(alpha))
    worst_pair, worst = max(coeffs, key=lambda c: c[1])
    if worst <= tol:
        return AxisVerdict(True, f"all coefficients <= {tol:g}; largest "
                           f"{worst:.3g} at pair {worst_pair}", worst, worst_pair)
    return AxisVerdict(False, f"coefficient {worst:.6g} > {tol:g} at pair "
                       f"{worst_pair}", worst, worst_pair)


@dataclass(frozen=True)
class GeneralFieldVerdict:
    """Necessary conditions for a general field on a solvable extension."""

    alpha0: float
    alpha0_window_ok: bool
    forced_case: Optional[str]
    forced_form_ok: Optional[bool]
    failed_condition: Optional[str]


def classify_general_field(f, E, tol: float = DEFAULT_TOLS.tol_cert) -> GeneralFieldVerdict:
    """Check the necessary conditions for E = sum alpha_i e_i to define a
    non-positive connection.

    The b-component alpha_0 must avoid the open interval (mu_1, mu_n); in
    the extreme regimes (alpha_0 >= mu_n with mu_n > 0, or alpha_0 <= mu_1
    with mu_1 < 0) the field is forced to be mu_n*b (resp. mu_1*b) with
    all positive (negative) eigenvalues equal to the extreme one.
    """
    f = _as_family(f)
    f.require_nonzero()
    E = np.asarray(E, dtype=float)
    if E.shape != (f.n + 1,):
        raise ValueError(f"field must have length {f.n + 1}")
    if np.linalg.norm(E) == 0.0:
        raise ValueError("field vanishes")
    mu = np.array(f.mu)
    mu1, mun = mu[0], mu[-1]
    alpha0 = float(E[0])

    window_ok = not (mu1 + tol < alpha0 < mun - tol)
    failed = None if window_ok else (
        f"alpha0 = {alpha0:.6g} lies inside ({mu1:.6g}, {mun:.6g})")

    forced_case = None
    forced_ok = None
    if window_ok:
        if mun > 0 and alpha0 >= mun - tol:
            forced_case = "upper"
            eq_extreme = np.all(np.abs(mu[mu > 0] - mun) <= tol)
            target = np.zeros(f.n + 1)
            target[0] = mun
            forced_ok = bool(eq_extreme and np.abs(E - target).max() <= tol)
            if not forced_ok:
                failed = ("forced form E = mu_n*b with all positive eigenvalues "
                          "equal to mu_n does not hold")
        elif mu1 < 0 and alpha0 <= mu1 + tol:
            forced_case = "lower"
            eq_extreme = np.all(np.abs(mu[mu < 0] - mu1) <= tol)
            target = np.zeros(f.n + 1)
            target[0] = mu1
            forced_ok = bool(eq_extreme and np.abs(E - target).max() <= tol)
            if not forced_ok:
                failed = ("forced form E = mu_1*b with all negative eigenvalues "
                          "equal to mu_1 does not hold")
    return GeneralFieldVerdict(alpha0, window_ok, forced_case, forced_ok, failed)


def eigenvector_snp(f, k: int) -> dict:
    """Threshold test for the eigenvector field e_k on an all-positive
    spectrum: necessary mu_k <= 4 mu_1, sufficient mu_k < 4 mu_1.

    k is 1-based into the sorted spectrum.  The extreme frame partner is
    e_1, with curvature product mu_1 * mu_k.
    """
    f = _as_family(f)
    if any(m <= 0 for m in f.mu):
        raise ValueError("eigenvector threshold assumes all eigenvalues positive")
    if not 1 <= k <= f.n:
        raise ValueError(f"k must be in 1..{f.n}")
    mu1 = f.mu[0]
    muk = f.mu[k - 1]
    return {
        "necessary": muk <= 4.0 * mu1,
        "sufficient": muk < 4.0 * mu1,
        "witness_value": mu1 * muk,
        "witness_index": 1,
    }


def direct_sum(A: MetricLieAlgebra, B: MetricLieAlgebra) -> MetricLieAlgebra:
    """Orthogonal direct sum, block structure constants and block metric."""
    na, nb = A.n, B.n
    n = na + nb
    c = np.zeros((n, n, n))
    c[:na, :na, :na] = A.algebra.c
    c[na:, na:, na:] = B.algebra.c
    g = np.zeros((n, n))
    g[:na, :na] = A.metric.g
    g[na:, na:] = B.metric.g
    return MetricLieAlgebra(LieAlgebra(c), Metric(g))


@dataclass(frozen=True)
class ExtensionCheck:
    """Validity report for a 4-dimensional extension of a Milnor algebra."""

    jacobi_ok: bool
    jacobi_residual: float
    unimodular: bool
    unimodular_residual: float
    l_lambda_antisymmetric: bool
    l_lambda_residual: float
    algebra: Optional[MetricLieAlgebra]


def extension4_check(t: MilnorTriple | tuple, L) -> ExtensionCheck:
    """Check the extension of a Milnor algebra by ad_b = L (b at index 0).

    Validates the Jacobi identity of the extension, whether the result is
    unimodular, and the anti-symmetry of L*Lambda for the diagonal operator
    Lambda with eigenvalues (1, l1, l2, l3) (L embedded with zero b row and
    column).  An invalid extension is reported, not raised.
    """
    if not isinstance(t, MilnorTriple):
        t = MilnorTriple(*t)
    L = np.asarray(L, dtype=float)
    if L.shape != (3, 3):
        raise ValueError("L must be a 3x3 matrix")

    c = np.zeros((4, 4, 4))
    base = milnor(t).algebra.c
    c[1:, 1:, 1:] = base
    for i in range(3):
        for j in range(3):
            c[0, 1 + i, 1 + j] = L[j, i]
            c[1 + i, 0, 1 + j] = -L[j, i]
    jac = jacobi_residual(c)
    tol = DEFAULT_TOLS.tol_alg

    L4 = np.zeros((4, 4))
    L4[1:, 1:] = L
    lam4 = np.diag([1.0, t.l1, t.l2, t.l3])
    prod = L4 @ lam4
    ll_res = float(np.abs(prod + prod.T).max())

    if jac > tol:
        return ExtensionCheck(False, jac, False, float("nan"),
                              ll_res <= tol, ll_res, None)
    mla = MetricLieAlgebra(LieAlgebra(c))
    uni, uni_res = is_unimodular(mla)
    return ExtensionCheck(True, jac, uni, uni_res, ll_res <= tol, ll_res, mla)
