"""Curvature of homogeneous Weyl connections on metric Lie algebras.

The package computes Riemannian and Weyl sectional curvature for
left-invariant structures, certifies non-positivity (exactly in three
dimensions, by eigenvalue bound plus decomposable witness search above),
scans stretch factors for stretched non-positivity, handles reductive
homogeneous spaces at the algebra level, and integrates the Gaussian
thermostat flow in the left-invariant frame.
"""

from .config import DEFAULT_TOLS, Tolerances, default_seed
from .families import (MilnorTriple, SolvableFamily, abelian, classify_axis_field,
                       classify_general_field, direct_sum, eigenvector_snp,
                       extension4_check, hyperbolic, milnor, solvable)
from .homogeneous import (ReductiveSpace, nabla_at_o, p0, sectional_homogeneous,
                          u_tensor, verify_invariant_field)
from .levicivita import (check_parallel_consequence, classify_field, curvature,
                         divergence, nabla, ricci, sectional)
from .liealg import (InvalidAlgebraError, LieAlgebra, Metric, MetricLieAlgebra,
                     ad, bracket, commutator_subalgebra, is_unimodular,
                     orthonormalize)
from .thermostat import IntegratorConfig, Trajectory, integrate, reconstruct, rhs
from .weyl import (BivectorForm, Certificate, CertifyConfig, Plane, WeylStructure,
                   certify_nonpositive, check_snp_sufficient_ow, check_W1,
                   check_W2, check_W4_W5, distance_curvature, partial_divergence,
                   snp_scan, weyl_form, weyl_nabla, weyl_sectional)

__version__ = "0.1.0"
