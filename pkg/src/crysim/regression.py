"""Regressors for scalar targets over feature vectors.

Nearest-neighbor averaging (fixed k and fixed relative radius), ridge
regression in closed form, kernel ridge regression with
exponential-of-distance kernels, and the trace-based degrees-of-freedom
estimate of either linear smoother.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    InsufficientDataError,
    SingularSystemError,
)
from .similarity import MeasureSpec, distances_to_point

KERNEL_KINDS = ("rbf", "laplacian", "l3", "cosine", "braycurtis")


@dataclass(frozen=True)
class KernelSpec:
    """exp(-gamma * D) kernel where D depends on the kind.

    rbf uses the squared 2-norm, laplacian the 1-norm, l3 the 3-norm,
    cosine and braycurtis the respective dissimilarities.  Only rbf and
    laplacian are guaranteed positive semidefinite.
    """

    kind: str
    gamma: float

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"gamma must be positive, got {self.gamma}")


_KERNEL_MEASURES = {
    "rbf": MeasureSpec("pnorm", p=2.0),
    "laplacian": MeasureSpec("pnorm", p=1.0),
    "l3": MeasureSpec("pnorm", p=3.0),
    "cosine": MeasureSpec("cosine"),
    "braycurtis": MeasureSpec("braycurtis"),
}


def kernel_matrix(kernel, A, B) -> np.ndarray:
    """Gram block K[i, j] = kernel(A[i], B[j]); |A| x |B|.

    ``kernel`` is normally a KernelSpec; any callable (A, B) -> matrix is
    accepted as an extension point (used e.g. to test with a plain linear
    kernel).
    """
    if callable(kernel):
        return np.asarray(kernel(np.atleast_2d(A), np.atleast_2d(B)), dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatchError(f"feature dims {A.shape[1]} vs {B.shape[1]}")
    measure = _KERNEL_MEASURES[kernel.kind]
    out = np.empty((A.shape[0], B.shape[0]))
    for i in range(A.shape[0]):
        d = distances_to_point(measure, B, A[i])
        if kernel.kind == "rbf":
            d = d * d
        out[i] = np.exp(-kernel.gamma * d)
    return out


@dataclass(frozen=True)
class KnnConfig:
    """k, the measure, and whether zero-distance training points are skipped."""

    k: int
    measure: MeasureSpec
    self_exclusion: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


def knn_neighbor_indices(X, query, cfg: KnnConfig) -> np.ndarray:
    """Indices of the k nearest training rows under cfg.measure.

    Ties at the k-th distance break toward the lower training index.  With
    self_exclusion, rows at distance exactly zero are never neighbors.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    d = distances_to_point(cfg.measure, X, query)
    candidates = np.arange(len(X))
    if cfg.self_exclusion:
        keep = d != 0.0
        d, candidates = d[keep], candidates[keep]
    if cfg.k > len(candidates):
        raise InsufficientDataError(
            f"k={cfg.k} exceeds the {len(candidates)} available training points"
        )
    order = np.argsort(d, kind="stable")
    return candidates[order[: cfg.k]]


def knn_predict(train, query, cfg: KnnConfig) -> float:
    """Mean target of the k nearest training points."""
    X, y = train
    y = np.asarray(y, dtype=float)
    return float(y[knn_neighbor_indices(X, query, cfg)].mean())


def fixed_radius_predict(
    train, query, measure: MeasureSpec, eps: float, self_exclusion: bool = False
) -> float:
    """Mean target over training points within (1+eps) x nearest distance.

    The nearest (non-self when self_exclusion is set) training point
    defines the unit radius; the boundary is inclusive.
    """
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    X, y = train
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    d = distances_to_point(measure, X, query)
    if self_exclusion:
        keep = d != 0.0
        d, y = d[keep], y[keep]
    if len(d) == 0:
        raise InsufficientDataError("no training points in radius search")
    radius = (1.0 + eps) * d.min()
    return float(y[d <= radius].mean())


@dataclass
class RidgeModel:
    """Closed-form ridge coefficients (no intercept)."""

    beta: np.ndarray
    lam: float


def ridge_fit(X, y, lam: float) -> RidgeModel:
    """beta = (X'X + lam I)^-1 X'y; SingularSystemError if not solvable."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    if lam < 0:
        raise ValueError(f"lambda must be nonnegative, got {lam}")
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatchError(f"{X.shape[0]} rows vs {y.shape[0]} targets")
    try:
        if lam > 0 and X.shape[1] > X.shape[0]:
            # identical solution through the smaller system:
            # (X'X + lam I)^-1 X' == X' (XX' + lam I)^-1 for lam > 0
            gram = X @ X.T + lam * np.eye(X.shape[0])
            beta = X.T @ scipy.linalg.solve(gram, y, assume_a="pos")
        else:
            gram = X.T @ X + lam * np.eye(X.shape[1])
            beta = scipy.linalg.solve(gram, X.T @ y, assume_a="pos")
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise SingularSystemError(f"normal equations singular at lambda={lam}") from exc
    return RidgeModel(beta=beta, lam=float(lam))


def ridge_predict(model: RidgeModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != len(model.beta):
        raise DimensionMismatchError(f"{X.shape[1]} features vs {len(model.beta)} coefficients")
    return X @ model.beta


@dataclass
class KRRModel:
    """Dual coefficients (K + lam I)^-1 y plus what is needed to predict."""

    dual_coeffs: np.ndarray
    train_X: np.ndarray
    kernel: object  # KernelSpec or callable
    lam: float


def krr_fit(X, y, lam: float, kernel) -> KRRModel:
    """Solve (K + lam I) alpha = y with a symmetric indefinite solver.

    The kernel need not be positive semidefinite, so failures at tiny lam
    surface as SingularSystemError rather than being masked.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatchError(f"{X.shape[0]} rows vs {y.shape[0]} targets")
    gram = kernel_matrix(kernel, X, X)
    try:
        dual = scipy.linalg.solve(gram + lam * np.eye(len(y)), y, assume_a="sym")
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise SingularSystemError(f"K + lambda I singular at lambda={lam}") from exc
    return KRRModel(dual_coeffs=dual, train_X=X.copy(), kernel=kernel, lam=float(lam))


def krr_predict(model: KRRModel, Q) -> np.ndarray:
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    if Q.shape[1] != model.train_X.shape[1]:
        raise DimensionMismatchError(
            f"{Q.shape[1]} features vs {model.train_X.shape[1]} at fit time"
        )
    return kernel_matrix(model.kernel, Q, model.train_X) @ model.dual_coeffs


def degrees_of_freedom(model, X=None) -> float:
    """Trace of the linear smoother mapping targets to fitted values.

    Ridge: tr(X (X'X + lam I)^-1 X') = sum s_i^2 / (s_i^2 + lam) over the
    singular values of the training matrix X (which must be passed in).
    KRR: tr(K (K + lam I)^-1) = sum w_i / (w_i + lam) over the eigenvalues
    of the training Gram matrix.
    """
    if isinstance(model, RidgeModel):
        if X is None:
            raise ValueError("ridge degrees of freedom need the training matrix")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        n, d = X.shape
        s2 = np.linalg.svd(X, compute_uv=False) ** 2
        if model.lam == 0.0:
            tol = s2.max(initial=0.0) * max(n, d) * np.finfo(float).eps
            if d > n or np.any(s2 <= tol):
                raise SingularSystemError("X'X singular at lambda=0")
            return float(np.sum(s2 / s2))
        return float(np.sum(s2 / (s2 + model.lam)))
    if isinstance(model, KRRModel):
        gram = kernel_matrix(model.kernel, model.train_X, model.train_X)
        w = np.linalg.eigvalsh(gram)
        shifted = w + model.lam
        if np.any(np.abs(shifted) <= np.abs(w).max(initial=0.0) * len(w) * np.finfo(float).eps):
            raise SingularSystemError(f"K + lambda I singular at lambda={model.lam}")
        return float(np.sum(w / shifted))
    raise TypeError(f"unsupported model type {type(model).__name__}")
