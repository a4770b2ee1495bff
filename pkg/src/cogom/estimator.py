"""Grade-of-membership estimation from fused response and covariate Grams.

The estimator combines the debiased Gram matrices of a binary response
matrix and a real covariate matrix with a balance weight ``alpha``, extracts
the shared top-K eigenspace, locates one pure subject per extreme profile by
successive projection, and recovers membership scores and item parameters
from the resulting simplex geometry.
"""

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import ArgumentError, RankError, ShapeError, SignalError
from .hetero_pca import hetero_pca
from .linalg import SpectralDecomposition, gram, top_k_eigen
from .settings import numeric_settings
from .simplex import membership_from_vertices, successive_projection
from .validation import check_binary_matrix, check_matrix, check_symmetric

GRAM_DEBIAS_MODES = ("hetero", "none")


def _debiased_grams(responses, covariates, rank, alpha, debias, hetero_iters, hetero_tol):
    """Per-source Gram estimates; the covariate branch is skipped when unused."""
    if debias not in GRAM_DEBIAS_MODES:
        raise ArgumentError(f"debias must be one of {GRAM_DEBIAS_MODES}, got {debias!r}")

    def one(matrix):
        raw = gram(matrix)
        if debias == "none":
            return raw
        return hetero_pca(raw, rank, max_iters=hetero_iters, tol=hetero_tol).debiased_gram

    gram_responses = one(responses)
    use_covariates = alpha > 0 and covariates is not None and covariates.shape[1] > 0
    gram_covariates = one(covariates) if use_covariates else None
    return gram_responses, gram_covariates


def fused_gram(
    responses,
    covariates,
    alpha,
    rank,
    debias="hetero",
    hetero_iters=10,
    hetero_tol=1e-6,
    validate_binary=True,
):
    """Weighted sum of the two debiased Grams and its top-``rank`` eigenpairs.

    Returns ``(G, decomposition)`` with ``G = G_R + alpha * G_X``.  The
    covariate branch is skipped entirely when ``alpha == 0`` or there are no
    covariate columns, so the result is then independent of ``covariates``.
    """
    responses, covariates, alpha = _check_fit_inputs(
        responses, covariates, alpha, validate_binary
    )
    gram_responses, gram_covariates = _debiased_grams(
        responses, covariates, rank, alpha, debias, hetero_iters, hetero_tol
    )
    fused = _fuse(gram_responses, gram_covariates, alpha)
    return fused, top_k_eigen(fused, rank)


def _check_fit_inputs(responses, covariates, alpha, validate_binary):
    if validate_binary:
        responses = check_binary_matrix(responses, "responses")
    else:
        responses = check_matrix(responses, "responses")
    if covariates is not None:
        covariates = check_matrix(covariates, "covariates", allow_empty=True)
        if covariates.shape[0] != responses.shape[0]:
            raise ShapeError(
                f"responses and covariates must share rows: "
                f"{responses.shape[0]} vs {covariates.shape[0]}"
            )
    if not np.isfinite(alpha) or alpha < 0:
        raise ArgumentError(f"alpha must be a finite non-negative real, got {alpha}")
    return responses, covariates, float(alpha)


def _fuse(gram_responses, gram_covariates, alpha):
    if gram_covariates is None:
        return gram_responses
    return gram_responses + alpha * gram_covariates


def _pipeline_from_grams(
    responses, covariates, alpha, gram_responses, gram_covariates, rank, trunc_eps
):
    """Eigenspace -> vertex hunting -> membership -> item parameter recovery.

    Shared by the estimator and by cross-validation, which caches the
    alpha-independent Gram estimates across the candidate grid.
    """
    fused = _fuse(gram_responses, gram_covariates, alpha)
    decomposition = top_k_eigen(fused, rank)
    eigenvalues = decomposition.eigenvalues
    leading = max(eigenvalues[0], 0.0)
    if eigenvalues[-1] <= -numeric_settings.negative_eigenvalue_rtol * max(leading, 1e-300):
        raise SignalError(
            f"top-{rank} eigenvalues include {eigenvalues[-1]:.3e} < 0; "
            "the fused Gram does not support this rank, try a smaller one"
        )
    eigenvalues = np.maximum(eigenvalues, numeric_settings.eigenvalue_floor)

    vectors = decomposition.eigenvectors
    pure_subjects = successive_projection(vectors, rank)
    membership = membership_from_vertices(vectors, pure_subjects)

    use_covariates = gram_covariates is not None
    if use_covariates:
        stacked = np.hstack([responses, np.sqrt(alpha) * covariates])
    else:
        stacked = responses
    scale = np.sqrt(eigenvalues)
    right_vectors = (stacked.T @ vectors) / scale

    overlap = membership.T @ membership
    try:
        cho = scipy.linalg.cho_factor(overlap)
    except scipy.linalg.LinAlgError as exc:
        raise RankError(
            "membership matrix has numerically dependent columns; "
            "the fit is degenerate"
        ) from exc
    # (V Sigma U^T Pi) (Pi^T Pi)^{-1}, split into item and covariate blocks.
    projected = (right_vectors * scale) @ (vectors.T @ membership)
    coefficients = scipy.linalg.cho_solve(cho, projected.T).T

    n_items = responses.shape[1]
    item_params_raw = coefficients[:n_items]
    item_params = np.clip(item_params_raw, trunc_eps, 1.0 - trunc_eps)
    if use_covariates:
        covariate_params = coefficients[n_items:] / np.sqrt(alpha)
    else:
        covariate_params = np.empty((0, rank))
    return {
        "membership": membership,
        "item_params": item_params,
        "item_params_raw": item_params_raw,
        "covariate_params": covariate_params,
        "pure_subjects": pure_subjects,
        "decomposition": SpectralDecomposition(vectors, eigenvalues),
    }


class CovariateAssistedGoM(BaseEstimator):
    """Spectral grade-of-membership estimator with covariate fusion.

    Parameters
    ----------
    n_profiles : int, default 3
        Number of extreme latent profiles (K).
    alpha : float, default 0.0
        Balance weight on the covariate Gram; 0 ignores the covariates.
        ``cogom.selection.cross_validate_alpha`` chooses it from data.
    hetero_iters : int, default 10
        Diagonal-imputation updates used to debias each Gram.
    hetero_tol : float, default 1e-6
        Relative stopping tolerance of the debiasing loop.
    trunc_eps : float, default 1e-3
        Item parameters are truncated into [trunc_eps, 1 - trunc_eps].
    debias : {"hetero", "none"}, default "hetero"
        "none" uses the raw Grams (the vanilla-eigendecomposition baseline).
    validate_binary : bool, default True
        Require responses in {0, 1}.  Disable to fit on a matrix of
        response means (e.g. noiseless recovery studies).

    Attributes
    ----------
    membership_ : ndarray of shape (n_subjects, n_profiles)
        Estimated mixed-membership scores; every row lies on the simplex.
    item_params_ : ndarray of shape (n_items, n_profiles)
        Truncated item parameter estimates in [trunc_eps, 1 - trunc_eps].
    item_params_raw_ : ndarray of shape (n_items, n_profiles)
        Item parameters before truncation.
    covariate_params_ : ndarray of shape (n_covariates, n_profiles)
        Covariate loading estimates; empty when alpha == 0 or no covariates.
    pure_subjects_ : ndarray of shape (n_profiles,)
        Row indices selected as pure subjects, in pick order.  The pick
        order fixes the column order of all estimates.
    eigenvalues_, eigenvectors_ :
        Top-K eigenpairs of the fused debiased Gram.
    """

    def __init__(
        self,
        n_profiles=3,
        alpha=0.0,
        hetero_iters=10,
        hetero_tol=1e-6,
        trunc_eps=1e-3,
        debias="hetero",
        validate_binary=True,
    ):
        self.n_profiles = n_profiles
        self.alpha = alpha
        self.hetero_iters = hetero_iters
        self.hetero_tol = hetero_tol
        self.trunc_eps = trunc_eps
        self.debias = debias
        self.validate_binary = validate_binary

    def _validate_params(self):
        if not isinstance(self.n_profiles, (int, np.integer)) or self.n_profiles < 1:
            raise ArgumentError(f"n_profiles must be a positive integer, got {self.n_profiles!r}")
        if not 0.0 < self.trunc_eps < 0.5:
            raise ArgumentError(f"trunc_eps must lie in (0, 0.5), got {self.trunc_eps}")
        if self.hetero_iters < 0:
            raise ArgumentError(f"hetero_iters must be >= 0, got {self.hetero_iters}")

    def fit(self, responses, covariates=None):
        """Fit on an (n_subjects, n_items) response matrix.

        ``covariates`` is an optional (n_subjects, n_covariates) real matrix
        sharing the subject rows; it only enters the fit when ``alpha > 0``.
        """
        self._validate_params()
        responses, covariates, alpha = _check_fit_inputs(
            responses, covariates, self.alpha, self.validate_binary
        )
        rank = int(self.n_profiles)
        if responses.shape[0] <= rank:
            raise ArgumentError(
                f"need more subjects than profiles: {responses.shape[0]} <= {rank}"
            )
        gram_responses, gram_covariates = _debiased_grams(
            responses, covariates, rank, alpha, self.debias,
            self.hetero_iters, self.hetero_tol,
        )
        fitted = _pipeline_from_grams(
            responses, covariates, alpha, gram_responses, gram_covariates,
            rank, self.trunc_eps,
        )
        self.membership_ = fitted["membership"]
        self.item_params_ = fitted["item_params"]
        self.item_params_raw_ = fitted["item_params_raw"]
        self.covariate_params_ = fitted["covariate_params"]
        self.pure_subjects_ = fitted["pure_subjects"]
        self.eigenvalues_ = fitted["decomposition"].eigenvalues
        self.eigenvectors_ = fitted["decomposition"].eigenvectors
        self.alpha_ = alpha
        self.n_subjects_ = responses.shape[0]
        self.n_items_ = responses.shape[1]
        self.n_covariates_ = 0 if covariates is None else covariates.shape[1]
        return self

    def predict(self):
        """In-sample response probabilities, membership_ @ item_params_.T."""
        check_is_fitted(self, "membership_")
        return self.membership_ @ self.item_params_.T


class Identifiability(enum.Enum):
    IDENTIFIABLE = "identifiable"
    IDENTIFIABLE_RANK_DEFICIENT = "identifiable_rank_deficient"
    NOT_IDENTIFIABLE = "not_identifiable"
    UNDETERMINED = "undetermined"


@dataclass
class IdentifiabilityCheck:
    status: Identifiability
    #: the non-identifiable verdict additionally requires a fully interior
    #: subject, which cannot be observed from the parameter Gram alone
    interior_subject_caveat: bool = False


def check_identifiability(d, tol=1e-8) -> IdentifiabilityCheck:
    """Diagnose identifiability from the K-by-K parameter Gram.

    The input is the symmetric PSD matrix combining item and covariate
    second moments.  Full rank is identifiable; rank K-1 is identifiable
    unless some column of the top K-1 rows is an affine combination of the
    other columns there; lower rank is reported as undetermined.
    """
    mat = check_symmetric(d, "d")
    n = mat.shape[0]
    singular_values = np.linalg.svd(mat, compute_uv=False)
    rank = int(np.sum(singular_values > tol * max(singular_values[0], tol)))
    if rank == n:
        return IdentifiabilityCheck(Identifiability.IDENTIFIABLE)
    if rank < n - 1:
        return IdentifiabilityCheck(Identifiability.UNDETERMINED)
    top = mat[: n - 1, :]
    if _has_affine_column(top, tol):
        return IdentifiabilityCheck(
            Identifiability.NOT_IDENTIFIABLE, interior_subject_caveat=True
        )
    return IdentifiabilityCheck(Identifiability.IDENTIFIABLE_RANK_DEFICIENT)


def _has_affine_column(top, tol):
    """Is some column an affine combination of the other columns of ``top``?"""
    n_cols = top.shape[1]
    scale = max(1.0, float(np.max(np.abs(top))))
    for col in range(n_cols):
        others = np.delete(top, col, axis=1)
        if others.shape[1] == 0:
            continue
        # Stack the affine constraint sum(coefficients) = 1 below the system.
        system = np.vstack([others, np.ones(others.shape[1])])
        target = np.concatenate([top[:, col], [1.0]])
        coefficients, *_ = np.linalg.lstsq(system, target, rcond=None)
        residual = float(np.linalg.norm(system @ coefficients - target))
        if residual <= tol * scale:
            return True
    return False
