"""Seeded synthetic datasets for desk-scale experiments.

Two generators: a one-dimensional oscillating-decay curve with Gaussian
noise (used to show how the neighbor count k trades off against curvature
in nearest-neighbor regression), and sparse nonnegative high-dimensional
vectors (used by the distinctiveness analyses).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .regression import KnnConfig, knn_predict
from .similarity import MeasureSpec

SAMPLING_MODES = ("uniform_random", "grid")


@dataclass(frozen=True)
class SyntheticSpec:
    """How to sample the 1-D curve: size, range, noise, seed, spacing."""

    n: int = 200
    x_range: tuple[float, float] = (0.0, 5.0)
    mu: float = 0.0
    sigma: float = 0.1
    seed: int = 7
    sampling: str = "uniform_random"

    def __post_init__(self):
        lo, hi = self.x_range
        if not lo < hi:
            raise ValueError(f"empty range {self.x_range}")
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if self.sampling not in SAMPLING_MODES:
            raise ValueError(f"unknown sampling mode {self.sampling!r}")


def curve_values(x) -> np.ndarray:
    """Noise-free curve: exp(-x) + cos(1.2 pi x)."""
    x = np.asarray(x, dtype=float)
    return np.exp(-x) + np.cos(1.2 * np.pi * x)


def generate_curve_dataset(spec: SyntheticSpec) -> tuple[np.ndarray, np.ndarray]:
    """Sample (x, y) with y = exp(-x) + cos(1.2 pi x) + N(mu, sigma^2).

    Deterministic given the seed: x is drawn (or gridded) first, then the
    noise vector.
    """
    rng = np.random.default_rng(spec.seed)
    lo, hi = spec.x_range
    if spec.sampling == "uniform_random":
        x = rng.uniform(lo, hi, spec.n)
    else:
        x = np.linspace(lo, hi, spec.n)
    noise = rng.normal(spec.mu, spec.sigma, spec.n)
    return x, curve_values(x) + noise


@dataclass(frozen=True)
class CurveBenchmarkResult:
    x: np.ndarray
    y: np.ndarray
    predictions: dict  # k -> per-point predictions
    errors: dict  # k -> (rmse, mae)


def knn_curve_benchmark(spec: SyntheticSpec, k_list=(4, 8, 10)) -> CurveBenchmarkResult:
    """Predict every sampled point from its k nearest others (|x_i - x_j|).

    Self-exclusion is always on: a point never averages itself, so an even
    k takes k/2 neighbors from each side on an interior stretch of a grid.
    """
    x, y = generate_curve_dataset(spec)
    X = x[:, None]
    measure = MeasureSpec("pnorm", p=1.0)
    predictions = {}
    errors = {}
    for k in k_list:
        cfg = KnnConfig(k=int(k), measure=measure, self_exclusion=True)
        preds = np.array([knn_predict((X, y), X[i], cfg) for i in range(spec.n)])
        residual = y - preds
        rmse = float(np.sqrt(np.mean(residual**2)))
        mae = float(np.mean(np.abs(residual)))
        predictions[int(k)] = preds
        errors[int(k)] = (rmse, mae)
    return CurveBenchmarkResult(x=x, y=y, predictions=predictions, errors=errors)


def generate_sparse_benchmark(n: int, d: int, sparsity: float, seed: int) -> np.ndarray:
    """n sparse nonnegative vectors of dimension d.

    Each vector gets ceil((1 - sparsity) * d) nonzero coordinates at seeded
    random positions with values uniform in (0, 1].
    """
    if not 0.0 < sparsity < 1.0:
        raise ValueError(f"sparsity must be in (0, 1), got {sparsity}")
    if n < 2 or d < 2:
        raise ValueError(f"need n, d >= 2, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    nnz = math.ceil((1.0 - sparsity) * d)
    X = np.zeros((n, d))
    for i in range(n):
        positions = rng.choice(d, size=nnz, replace=False)
        X[i, positions] = 1.0 - rng.random(nnz)  # uniform in (0, 1]
    return X
