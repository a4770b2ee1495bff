"""Dense symmetric eigendecomposition, Gram construction and matrix norms.

Everything here is deterministic: the eigen backend computes the full
spectrum with LAPACK's symmetric solver and truncates, equal eigenvalues
keep a stable order, and a sign convention pins each eigenvector.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import ArgumentError, ConvergenceError
from .settings import numeric_settings
from .validation import check_matrix, check_square, check_symmetric


@dataclass
class SpectralDecomposition:
    """Top-K eigenpairs of a symmetric matrix.

    ``eigenvectors`` is n-by-K with orthonormal columns, ``eigenvalues`` is
    sorted non-increasing, and in each eigenvector the entry of largest
    absolute value is non-negative.
    """

    eigenvectors: np.ndarray
    eigenvalues: np.ndarray

    @property
    def rank(self) -> int:
        return self.eigenvalues.shape[0]


class MatrixNorms(NamedTuple):
    frobenius: float
    spectral: float
    two_to_inf: float
    entry_inf: float


def _full_eigh(s):
    """Full symmetric eigendecomposition, ascending eigenvalues."""
    try:
        return np.linalg.eigh(s)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"symmetric eigendecomposition failed: {exc}") from exc


def _fix_signs(vectors):
    """Make the largest-magnitude entry of each column non-negative (in place)."""
    lead = np.argmax(np.abs(vectors), axis=0)
    flip = vectors[lead, np.arange(vectors.shape[1])] < 0
    vectors[:, flip] *= -1.0
    return vectors


def _check_residual(s, decomposition):
    """Gate ||S u - lambda u||_2 per pair against the relative tolerance."""
    scale = float(np.linalg.norm(s, "fro"))
    resid = s @ decomposition.eigenvectors - decomposition.eigenvectors * decomposition.eigenvalues
    worst = float(np.max(np.linalg.norm(resid, axis=0)))
    if worst > numeric_settings.eigen_residual_rtol * scale:
        raise ConvergenceError(
            f"eigenpair residual {worst:.3e} exceeds "
            f"{numeric_settings.eigen_residual_rtol:g} * ||S||_F = "
            f"{numeric_settings.eigen_residual_rtol * scale:.3e}"
        )


def top_k_eigen(matrix, rank) -> SpectralDecomposition:
    """Top-``rank`` eigenpairs of a symmetric matrix, largest algebraic first.

    Ties between equal eigenvalues keep the backend's stable order; each
    eigenvector is sign-fixed so repeated calls are bit-identical.
    """
    s = check_symmetric(matrix)
    n = s.shape[0]
    if not isinstance(rank, (int, np.integer)) or isinstance(rank, bool):
        raise ArgumentError(f"rank must be an integer, got {rank!r}")
    if not 1 <= rank <= n:
        raise ArgumentError(f"rank must be in [1, {n}], got {rank}")
    values, vectors = _full_eigh(s)
    order = np.argsort(-values, kind="stable")[:rank]
    decomposition = SpectralDecomposition(
        eigenvectors=_fix_signs(vectors[:, order].copy()),
        eigenvalues=values[order].copy(),
    )
    _check_residual(s, decomposition)
    return decomposition


def gram(a) -> np.ndarray:
    """A @ A.T, symmetrized so the result is exactly symmetric."""
    arr = check_matrix(a)
    g = arr @ arr.T
    return (g + g.T) / 2.0


def hollow(a) -> np.ndarray:
    """Copy of a square matrix with its diagonal zeroed."""
    arr = check_square(a)
    out = arr.copy()
    np.fill_diagonal(out, 0.0)
    return out


def low_rank_approx(matrix, rank) -> np.ndarray:
    """Best (Frobenius) rank-``rank`` approximation of a symmetric matrix.

    Keeps the ``rank`` largest-magnitude eigenvalues, i.e. the truncation the
    singular value decomposition of a symmetric matrix would produce.
    """
    s = check_symmetric(matrix)
    n = s.shape[0]
    if not 1 <= rank <= n:
        raise ArgumentError(f"rank must be in [1, {n}], got {rank}")
    values, vectors = _full_eigh(s)
    keep = np.argsort(-np.abs(values), kind="stable")[:rank]
    approx = (vectors[:, keep] * values[keep]) @ vectors[:, keep].T
    return (approx + approx.T) / 2.0


def matrix_norms(a) -> MatrixNorms:
    """Frobenius, spectral, two-to-infinity and entry-wise max norms."""
    arr = check_matrix(a)
    spectral_sq = top_k_eigen(gram(arr), 1).eigenvalues[0]
    return MatrixNorms(
        frobenius=float(np.linalg.norm(arr, "fro")),
        spectral=float(np.sqrt(max(spectral_sq, 0.0))),
        two_to_inf=float(np.max(np.linalg.norm(arr, axis=1))),
        entry_inf=float(np.max(np.abs(arr))),
    )
