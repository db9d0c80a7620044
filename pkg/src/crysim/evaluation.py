"""Model evaluation: cross-validation, metrics, grid search, 2-D projection.

The fold plan is a deterministic shuffle-then-round-robin assignment, so a
given (n, n_folds, seed) always yields the same partition.  Grid search
minimizes mean cross-validated RMSE, breaking exact ties toward stronger
regularization (larger lambda, then smaller gamma).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CrysimError,
    DimensionMismatchError,
    GridSearchError,
    InsufficientDataError,
    ZeroVarianceError,
)
from .regression import (
    KnnConfig,
    KernelSpec,
    knn_predict,
    krr_fit,
    krr_predict,
    ridge_fit,
    ridge_predict,
)

DEFAULT_LAMBDA_GRID = (1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0)
DEFAULT_GAMMA_GRID = DEFAULT_LAMBDA_GRID
DEFAULT_SEED = 42


@dataclass(frozen=True)
class FoldPlan:
    """Partition of {0..n-1} into folds of near-equal size."""

    n: int
    n_folds: int
    seed: int
    assignment: np.ndarray

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)


def make_fold_plan(n: int, n_folds: int, seed: int = DEFAULT_SEED) -> FoldPlan:
    if not 2 <= n_folds <= n:
        raise InsufficientDataError(f"need 2 <= n_folds <= n, got n_folds={n_folds}, n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    assignment = np.empty(n, dtype=int)
    assignment[perm] = np.arange(n) % n_folds
    return FoldPlan(n=n, n_folds=n_folds, seed=seed, assignment=assignment)


def metrics(y, yhat) -> tuple[float, float, float]:
    """(RMSE, MAE, R^2); R^2 needs a non-constant target vector."""
    y = np.asarray(y, dtype=float)
    yhat = np.asarray(yhat, dtype=float)
    if y.shape != yhat.shape or y.size == 0:
        raise DimensionMismatchError(f"target shapes {y.shape} vs {yhat.shape}")
    residual = y - yhat
    rmse = float(np.sqrt(np.mean(residual**2)))
    mae = float(np.mean(np.abs(residual)))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise ZeroVarianceError("R^2 undefined for a constant target vector")
    r2 = 1.0 - float(np.sum(residual**2)) / ss_tot
    return rmse, mae, r2


# --- model specs -------------------------------------------------------


@dataclass(frozen=True)
class RidgeConfig:
    lam: float


@dataclass(frozen=True)
class KrrConfig:
    kernel: KernelSpec
    lam: float


ModelSpec = KnnConfig | RidgeConfig | KrrConfig


def fit_predict(spec: ModelSpec, X_train, y_train, X_test) -> np.ndarray:
    """Train the spec'd model and predict the test rows."""
    if isinstance(spec, KnnConfig):
        return np.array([knn_predict((X_train, y_train), q, spec) for q in np.atleast_2d(X_test)])
    if isinstance(spec, RidgeConfig):
        return ridge_predict(ridge_fit(X_train, y_train, spec.lam), X_test)
    if isinstance(spec, KrrConfig):
        return krr_predict(krr_fit(X_train, y_train, spec.lam, spec.kernel), X_test)
    raise TypeError(f"unsupported model spec {type(spec).__name__}")


def describe_model(spec: ModelSpec) -> tuple[str, dict]:
    if isinstance(spec, KnnConfig):
        return "knn", {"k": spec.k, "measure": spec.measure.label}
    if isinstance(spec, RidgeConfig):
        return "ridge", {"lambda": spec.lam}
    if isinstance(spec, KrrConfig):
        return "krr", {"kernel": spec.kernel.kind, "lambda": spec.lam, "gamma": spec.kernel.gamma}
    raise TypeError(f"unsupported model spec {type(spec).__name__}")


@dataclass(frozen=True)
class FoldMetrics:
    rmse: float
    mae: float
    r2: float

    def as_dict(self) -> dict:
        return {"rmse": self.rmse, "mae": self.mae, "r2": self.r2}


@dataclass(frozen=True)
class EvaluationReport:
    """Per-fold metrics with their mean and population standard deviation."""

    model: str
    params: dict
    folds: tuple[FoldMetrics, ...]
    mean: FoldMetrics
    std: FoldMetrics

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "params": dict(self.params),
            "folds": [f.as_dict() for f in self.folds],
            "mean": self.mean.as_dict(),
            "std": self.std.as_dict(),
        }


def _summarize(folds: list[FoldMetrics]) -> tuple[FoldMetrics, FoldMetrics]:
    table = np.array([[f.rmse, f.mae, f.r2] for f in folds])
    return FoldMetrics(*np.mean(table, axis=0)), FoldMetrics(*np.std(table, axis=0))


def kfold_cv(X, y, spec: ModelSpec, plan: FoldPlan) -> EvaluationReport:
    """Fit on each fold's complement, evaluate on the fold.

    Folds whose test targets are constant report R^2 as NaN rather than
    failing the whole run.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    if len(X) != plan.n or len(y) != plan.n:
        raise DimensionMismatchError(f"plan is for n={plan.n}, data has {len(X)} rows")
    folds = []
    for fold in range(plan.n_folds):
        test, train = plan.test_indices(fold), plan.train_indices(fold)
        try:
            yhat = fit_predict(spec, X[train], y[train], X[test])
            try:
                rmse, mae, r2 = metrics(y[test], yhat)
            except ZeroVarianceError:
                residual = y[test] - yhat
                rmse = float(np.sqrt(np.mean(residual**2)))
                mae = float(np.mean(np.abs(residual)))
                r2 = float("nan")
        except (CrysimError, np.linalg.LinAlgError) as exc:
            raise type(exc)(f"fold {fold}: {exc}") from exc
        folds.append(FoldMetrics(rmse, mae, r2))
    mean, std = _summarize(folds)
    name, params = describe_model(spec)
    return EvaluationReport(name, params, tuple(folds), mean, std)


@dataclass(frozen=True)
class GridSearchResult:
    lam: float
    gamma: float | None
    report: EvaluationReport
    cells: tuple[tuple[float, float | None, float], ...]  # (lam, gamma, mean rmse)


def grid_search(X, y, family, lambda_grid, gamma_grid, plan: FoldPlan) -> GridSearchResult:
    """Exhaustive (lambda, gamma) search minimizing mean CV RMSE.

    ``family(lam, gamma)`` must return a model spec. Pass ``(None,)`` as the
    gamma grid for families without a gamma.  Exact RMSE ties prefer the
    larger lambda, then the smaller gamma.
    """
    lambda_grid = tuple(lambda_grid)
    gamma_grid = tuple(gamma_grid)
    if not lambda_grid or not gamma_grid:
        raise ValueError("hyperparameter grids must be non-empty")
    best = None
    cells = []
    failures = []
    for lam in lambda_grid:
        for gamma in gamma_grid:
            try:
                report = kfold_cv(X, y, family(lam, gamma), plan)
            except (CrysimError, np.linalg.LinAlgError) as exc:
                failures.append(f"lambda={lam}, gamma={gamma}: {exc}")
                continue
            rmse = report.mean.rmse
            cells.append((lam, gamma, rmse))
            candidate = (rmse, -lam, gamma if gamma is not None else 0.0)
            if best is None or candidate < best[0]:
                best = (candidate, lam, gamma, report)
    if best is None:
        raise GridSearchError("every grid cell failed: " + "; ".join(failures))
    _, lam, gamma, report = best
    return GridSearchResult(lam=lam, gamma=gamma, report=report, cells=tuple(cells))


# --- projection and grouping -------------------------------------------


def pca_project(X, n_components: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Project mean-centered data onto the leading principal directions.

    Returns (n x n_components scores, explained-variance fractions).
    Component sign is fixed so the largest-magnitude loading is positive.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, d = X.shape
    if n < 2:
        raise InsufficientDataError("need at least 2 rows for a projection")
    if not 1 <= n_components <= d:
        raise ValueError(f"n_components must be in [1, {d}], got {n_components}")
    centered = X - X.mean(axis=0)
    cov = centered.T @ centered / n
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = np.clip(eigenvalues[order], 0.0, None)
    components = eigenvectors[:, order[:n_components]]
    for col in range(n_components):
        peak = np.argmax(np.abs(components[:, col]))
        if components[peak, col] < 0:
            components[:, col] = -components[:, col]
    total = eigenvalues.sum()
    fractions = eigenvalues[:n_components] / total if total > 0 else np.zeros(n_components)
    return centered @ components, fractions


def _kmeans_once(P, k, rng):
    n = len(P)
    # k-means++ style seeding
    centers = [P[int(rng.integers(n))]]
    for _ in range(k - 1):
        d2 = np.min([np.sum((P - c) ** 2, axis=1) for c in centers], axis=0)
        total = d2.sum()
        if total == 0:
            centers.append(P[int(rng.integers(n))])
            continue
        centers.append(P[int(rng.choice(n, p=d2 / total))])
    centers = np.array(centers)
    labels = np.zeros(n, dtype=int)
    for _ in range(300):
        dist2 = ((P[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(dist2, axis=1)
        for c in range(k):
            members = new_labels == c
            if members.any():
                centers[c] = P[members].mean(axis=0)
            else:  # re-seed an empty cluster on the overall farthest point
                centers[c] = P[int(np.argmax(np.min(dist2, axis=1)))]
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    wcss = float(((P - centers[labels]) ** 2).sum())
    return labels, wcss


def cluster_groups(P, k: int = 3, seed: int = DEFAULT_SEED, restarts: int = 10) -> np.ndarray:
    """Lloyd's k-means labels, best of ``restarts`` seeded runs by WCSS."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if len(P) < k:
        raise InsufficientDataError(f"need at least k={k} points, got {len(P)}")
    rng = np.random.default_rng(seed)
    best_labels, best_wcss = None, np.inf
    for _ in range(restarts):
        labels, wcss = _kmeans_once(P, k, rng)
        if wcss < best_wcss:
            best_labels, best_wcss = labels, wcss
    return best_labels
