"""Simplex geometry: vertex hunting and Euclidean projection onto the simplex."""

import numpy as np

from .exceptions import ArgumentError, GeometryError, ShapeError
from .settings import numeric_settings
from .validation import check_matrix, check_vector


def successive_projection(u, n_vertices) -> np.ndarray:
    """Greedy vertex hunting on the rows of ``u``.

    Repeats ``n_vertices`` times: pick the row of largest Euclidean norm
    (ties broken by lowest index), normalize it, and project every row onto
    its orthogonal complement.  Returns the picked row indices in pick order.
    """
    mat = check_matrix(u, "u")
    n_rows = mat.shape[0]
    if not 1 <= n_vertices <= n_rows:
        raise ArgumentError(
            f"n_vertices must be in [1, {n_rows}], got {n_vertices}"
        )
    work = mat.copy()
    picks = []
    for _ in range(n_vertices):
        sq_norms = np.einsum("ij,ij->i", work, work)
        best = int(np.argmax(sq_norms))
        if sq_norms[best] <= 0.0:
            raise GeometryError(
                "all row norms vanished during successive projection; "
                "the rows do not span the requested number of vertices"
            )
        if best in picks:
            raise GeometryError(
                f"successive projection re-selected row {best}; "
                "geometry is degenerate for the requested number of vertices"
            )
        picks.append(best)
        direction = work[best] / np.sqrt(sq_norms[best])
        work = work - np.outer(work @ direction, direction)
    return np.asarray(picks, dtype=np.intp)


def project_to_simplex(v) -> np.ndarray:
    """Euclidean projection of a vector onto {w >= 0, sum(w) = 1}."""
    vec = check_vector(v, "v")
    return _project_sorted(vec[None, :])[0]


def project_rows_to_simplex(a) -> np.ndarray:
    """Row-wise simplex projection; rows are independent."""
    mat = check_matrix(a, "a")
    return _project_sorted(mat)


def _project_sorted(mat):
    # Exact sort-based projection: after sorting each row descending, the
    # threshold tau is determined by the largest feasible support.
    srt = np.sort(mat, axis=1, kind="stable")[:, ::-1]
    cumsum = np.cumsum(srt, axis=1)
    support = np.arange(1, mat.shape[1] + 1)
    feasible = srt + (1.0 - cumsum) / support > 0.0
    # First entry is always feasible, so the last feasible index exists.
    rho = mat.shape[1] - 1 - np.argmax(feasible[:, ::-1], axis=1)
    tau = (cumsum[np.arange(mat.shape[0]), rho] - 1.0) / (rho + 1.0)
    return np.maximum(mat - tau[:, None], 0.0)


def membership_from_vertices(u, vertex_indices) -> np.ndarray:
    """Barycentric coordinates of each row of ``u``, projected to the simplex.

    ``vertex_indices`` selects the rows used as simplex vertices; the result
    is ``u @ inv(u[vertex_indices])`` with each row projected back onto the
    simplex so the output always holds valid membership weights.
    """
    mat = check_matrix(u, "u")
    idx = np.asarray(vertex_indices, dtype=np.intp).ravel()
    if idx.size != mat.shape[1]:
        raise ShapeError(
            f"need exactly {mat.shape[1]} vertex indices, got {idx.size}"
        )
    if idx.size != np.unique(idx).size:
        raise ShapeError("vertex indices must be distinct")
    if idx.min() < 0 or idx.max() >= mat.shape[0]:
        raise ShapeError("vertex indices out of range")
    vertices = mat[idx]
    singular_values = np.linalg.svd(vertices, compute_uv=False)
    if singular_values[-1] <= 0.0 or (
        singular_values[0] / singular_values[-1]
        > numeric_settings.vertex_condition_limit
    ):
        raise GeometryError(
            "vertex matrix is numerically singular "
            f"(condition number > {numeric_settings.vertex_condition_limit:g}); "
            "consider reducing the number of profiles"
        )
    # u @ inv(vertices) via an LU solve on the transposed system.
    raw = np.linalg.solve(vertices.T, mat.T).T
    return project_rows_to_simplex(raw)
