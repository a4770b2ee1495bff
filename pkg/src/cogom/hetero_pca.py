"""Iterative diagonal imputation of a Gram matrix (heteroskedastic PCA).

Heteroskedastic noise biases only the diagonal of an observed Gram matrix.
The procedure zeroes the diagonal, then alternates between a low-rank
approximation and re-imputing the diagonal from it, leaving every
off-diagonal entry untouched.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ArgumentError
from .linalg import SpectralDecomposition, _full_eigh, hollow, top_k_eigen
from .validation import check_symmetric


@dataclass
class HeteroPcaResult:
    #: final iterate; off-diagonal equals the input Gram exactly
    debiased_gram: np.ndarray
    #: top-K eigenpairs of the debiased Gram
    decomposition: SpectralDecomposition
    iters_run: int
    final_change: float


def hetero_pca(gram_matrix, rank, max_iters=10, tol=1e-6, relative_tol=True) -> HeteroPcaResult:
    """Debias a symmetric Gram matrix by iterative diagonal imputation.

    Starting from the hollowed matrix, each iteration replaces the diagonal
    with the diagonal of the current best rank-``rank`` approximation.  The
    loop stops after ``max_iters`` updates or once the spectral norm of the
    update (relative to the spectral norm of the previous iterate when
    ``relative_tol``) drops below ``tol``.

    Parameters
    ----------
    gram_matrix : array, shape (n, n)
        Symmetric Gram estimate to debias.
    rank : int
        Target rank of the signal.
    max_iters : int, default 10
        Maximum number of diagonal updates; 0 returns the hollowed matrix.
    tol : float, default 1e-6
        Stopping threshold on the change between consecutive iterates.
    relative_tol : bool, default True
        Measure the change relative to max(spectral norm, 1) of the previous
        iterate instead of absolutely.
    """
    s = check_symmetric(gram_matrix)
    n = s.shape[0]
    if not 1 <= rank <= n:
        raise ArgumentError(f"rank must be in [1, {n}], got {rank}")
    if max_iters < 0:
        raise ArgumentError(f"max_iters must be >= 0, got {max_iters}")
    if not tol > 0:
        raise ArgumentError(f"tol must be positive, got {tol}")

    iterate = hollow(s)
    iters_run = 0
    change = np.inf
    while iters_run < max_iters:
        values, vectors = _full_eigh(iterate)
        # Truncation keeps the largest-magnitude eigenvalues; only its
        # diagonal is needed because the off-diagonal part is preserved.
        keep = np.argsort(-np.abs(values), kind="stable")[:rank]
        new_diag = np.einsum("ij,j->i", vectors[:, keep] ** 2, values[keep])
        # Consecutive iterates differ only on the diagonal, so the spectral
        # norm of the update is the max absolute diagonal change.
        delta = float(np.max(np.abs(new_diag - np.diag(iterate))))
        if relative_tol:
            previous_norm = float(np.max(np.abs(values)))
            change = delta / max(previous_norm, 1.0)
        else:
            change = delta
        np.fill_diagonal(iterate, new_diag)
        iters_run += 1
        if change < tol:
            break

    return HeteroPcaResult(
        debiased_gram=iterate,
        decomposition=top_k_eigen(iterate, rank),
        iters_run=iters_run,
        final_change=change,
    )
