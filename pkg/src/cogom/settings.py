"""Global numeric tolerances.

All hard-coded numerical gates live in one mutable record so they can be
tightened or relaxed in one place (e.g. inside tests).
"""

from dataclasses import dataclass


@dataclass
class NumericSettings:
    #: eigenpair residual gate, relative to the Frobenius norm of the input
    eigen_residual_rtol: float = 1e-8
    #: max absolute entry-wise asymmetry accepted by symmetric operations
    symmetry_atol: float = 1e-8
    #: condition-number gate for the pure-subject vertex matrix
    vertex_condition_limit: float = 1e12
    #: floor applied to top-K eigenvalues before taking square roots
    eigenvalue_floor: float = 1e-12
    #: a top-K eigenvalue below -rtol * leading eigenvalue is a signal failure
    negative_eigenvalue_rtol: float = 1e-8
    #: max deviation from orthonormality accepted by subspace metrics
    orthonormal_atol: float = 1e-8


numeric_settings = NumericSettings()
