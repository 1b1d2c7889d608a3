"""Numerical tolerances shared across the library.

All curvature quantities are computed in double precision from O(1)
structure constants, so the defaults leave generous headroom over the
accumulation error of the n <= 10 tensor contractions involved.
"""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Thresholds used by validity checks and certificates.

    tol_alg   algebraic residuals (Jacobi, skewness, orthonormality)
    tol_pd    positive definiteness of metrics (smallest eigenvalue)
    tol_rank  singular values below this count as zero in rank decisions
    tol_cert  curvature values within this of zero count as non-positive
    """

    tol_alg: float = 1e-9
    tol_pd: float = 1e-12
    tol_rank: float = 1e-9
    tol_cert: float = 1e-8


DEFAULT_TOLS = Tolerances()


def default_seed() -> int:
    """Seed for deterministic searches; WEYLCURV_SEED overrides the 0 default."""
    raw = os.environ.get("WEYLCURV_SEED", "")
    try:
        return int(raw)
    except ValueError:
        return 0
