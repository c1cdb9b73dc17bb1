"""Principal component analysis of the 10-D feature set.

The covariance here is 10 x 10 and fixed, so a cyclic Jacobi rotation
eigensolver is used instead of a general SVD. Components follow a
deterministic sign convention: the entry of largest magnitude in each
component is positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_JACOBI_TOL = 1e-12
_RANK_TOL = 1e-9


def jacobi_eigh(a: np.ndarray, tol: float = _JACOBI_TOL, max_sweeps: int = 100):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps continue until every off-diagonal entry falls below
    tol * max(|a|) of the input matrix. Returns (eigenvalues, columns of
    eigenvectors), unsorted.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or not np.allclose(a, a.T, atol=1e-10, rtol=1e-10):
        raise ValueError("jacobi_eigh needs a symmetric square matrix")
    v = np.eye(n)
    scale = max(float(np.abs(a).max()), 1e-300)
    threshold = tol * scale
    for _ in range(max_sweeps):
        off = np.abs(a - np.diag(np.diag(a))).max()
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                a[p, :], a[q, :] = c * a[p, :] - s * a[q, :], s * a[p, :] + c * a[q, :]
                a[p, q] = a[q, p] = 0.0
                v[:, p], v[:, q] = c * v[:, p] - s * v[:, q], s * v[:, p] + c * v[:, q]
    return np.diag(a).copy(), v


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray          # (k, d), orthonormal rows
    explained_variance: np.ndarray  # (k,), nonincreasing, >= 0
    rank_deficient: bool = False

    def __post_init__(self):
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=float))
        object.__setattr__(self, "components", np.asarray(self.components, dtype=float))
        object.__setattr__(self, "explained_variance",
                           np.asarray(self.explained_variance, dtype=float))


def pca_fit(x: np.ndarray, n_components: int = 3) -> PcaModel:
    """Top eigenpairs of the centered (population) covariance.

    When the numerical rank of the data falls below n_components the model
    is flagged rank_deficient; components spanning the null space are still
    returned (their explained variance is ~0) so projections keep a fixed
    width. Requesting more components than the dimension returns fewer.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n, d = x.shape
    if n < n_components:
        raise ValueError(f"need at least {n_components} rows, got {n}")
    mean = x.mean(axis=0)
    xc = x - mean
    cov = (xc.T @ xc) / n
    eigvals, eigvecs = jacobi_eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.maximum(eigvals[order], 0.0)
    eigvecs = eigvecs[:, order]
    k = min(n_components, d)
    components = eigvecs[:, :k].T.copy()
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    rank = int(np.sum(eigvals > _RANK_TOL * max(eigvals[0], 1e-300)))
    return PcaModel(mean=mean, components=components,
                    explained_variance=eigvals[:k],
                    rank_deficient=rank < n_components)


def pca_project(model: PcaModel, rows: np.ndarray) -> np.ndarray:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[1] != model.mean.shape[0]:
        raise ValueError(f"expected {model.mean.shape[0]} columns, got {rows.shape[1]}")
    return (rows - model.mean) @ model.components.T


def pca_reconstruct(model: PcaModel, coords: np.ndarray) -> np.ndarray:
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    if coords.shape[1] != model.components.shape[0]:
        raise ValueError("coordinate width does not match component count")
    return coords @ model.components + model.mean
