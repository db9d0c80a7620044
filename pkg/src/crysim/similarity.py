"""Dissimilarity measures between feature vectors and dataset-level analyses.

Four measures: a Hamming-style fraction of differing coordinates, p-norm
distances, cosine distance, and the Bray-Curtis dissimilarity.  On top of
them: full affinity matrices, the correlation of a measure's affinities
against the Hamming baseline (how much of the per-coordinate identity of
points the measure retains), fixed-relative-radius neighbor counts, and a
per-dimension variance summary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDataError,
    DimensionMismatchError,
    InsufficientDataError,
    ZeroDenominatorError,
    ZeroVectorError,
)

MEASURE_KINDS = ("hamming", "pnorm", "cosine", "braycurtis")


@dataclass(frozen=True)
class MeasureSpec:
    """Tagged choice of dissimilarity measure.

    ``p`` only matters for the p-norm; ``hamming_tolerance`` is the margin
    below which two coordinates count as equal (0 = exact equality).
    """

    kind: str
    p: float = 2.0
    hamming_tolerance: float = 0.0

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.kind == "pnorm" and not self.p >= 1.0:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if not (math.isfinite(self.hamming_tolerance) and self.hamming_tolerance >= 0):
            raise ValueError(f"bad hamming tolerance {self.hamming_tolerance}")

    @property
    def label(self) -> str:
        if self.kind == "pnorm":
            return f"l{self.p:g}"
        return self.kind


_NAMED_MEASURES = {
    "hamming": MeasureSpec("hamming"),
    "l1": MeasureSpec("pnorm", p=1.0),
    "l2": MeasureSpec("pnorm", p=2.0),
    "l3": MeasureSpec("pnorm", p=3.0),
    "cosine": MeasureSpec("cosine"),
    "braycurtis": MeasureSpec("braycurtis"),
}


def parse_measure(name: str) -> MeasureSpec:
    """Measure from its CLI name: hamming|l1|l2|l3|cosine|braycurtis."""
    try:
        return _NAMED_MEASURES[name]
    except KeyError:
        raise ValueError(f"unknown measure name {name!r}") from None


def distance(measure: MeasureSpec, u, v) -> float:
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if u.shape != v.shape or u.size == 0:
        raise DimensionMismatchError(f"vector dims {u.shape} vs {v.shape}")
    if measure.kind == "hamming":
        differing = np.count_nonzero(np.abs(u - v) > measure.hamming_tolerance)
        return differing / u.size
    if measure.kind == "pnorm":
        return float(np.sum(np.abs(u - v) ** measure.p) ** (1.0 / measure.p))
    if measure.kind == "cosine":
        if np.array_equal(u, v):
            return 0.0
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        if nu == 0.0 or nv == 0.0:
            raise ZeroVectorError("cosine distance undefined for a zero vector")
        return float(1.0 - (u @ v) / (nu * nv))
    numerator = float(np.sum(np.abs(u - v)))
    denominator = float(np.sum(np.abs(u + v)))
    if denominator == 0.0:
        if numerator == 0.0:
            return 0.0
        raise ZeroDenominatorError("bray-curtis denominator is zero on opposite vectors")
    return numerator / denominator


def distances_to_point(measure: MeasureSpec, X, q) -> np.ndarray:
    """Distances from every row of X to the point q (vectorized).

    Agrees with :func:`distance` row by row, including the exact-zero
    result for rows identical to q.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    q = np.asarray(q, dtype=float).ravel()
    if X.shape[1] != q.size or q.size == 0:
        raise DimensionMismatchError(f"vector dims {X.shape[1]} vs {q.size}")
    delta = np.abs(X - q)
    if measure.kind == "hamming":
        return np.count_nonzero(delta > measure.hamming_tolerance, axis=1) / q.size
    if measure.kind == "pnorm":
        return np.sum(delta**measure.p, axis=1) ** (1.0 / measure.p)
    if measure.kind == "cosine":
        nq = np.linalg.norm(q)
        nx = np.linalg.norm(X, axis=1)
        equal = np.all(X == q, axis=1)
        if nq == 0.0 and not equal.all():
            raise ZeroVectorError("cosine distance undefined for a zero vector")
        if np.any((nx == 0.0) & ~equal):
            raise ZeroVectorError(
                f"cosine distance undefined for zero vector at row "
                f"{int(np.argmax((nx == 0.0) & ~equal))}"
            )
        out = np.zeros(len(X))
        rest = ~equal
        out[rest] = 1.0 - (X[rest] @ q) / (nx[rest] * nq)
        return out
    numerator = delta.sum(axis=1)
    denominator = np.abs(X + q).sum(axis=1)
    bad = (denominator == 0.0) & (numerator > 0.0)
    if np.any(bad):
        raise ZeroDenominatorError(
            f"bray-curtis denominator is zero on opposite vectors at row {int(np.argmax(bad))}"
        )
    out = np.zeros(len(X))
    nonzero = denominator > 0.0
    out[nonzero] = numerator[nonzero] / denominator[nonzero]
    return out


@dataclass(frozen=True)
class AffinityMatrix:
    """Symmetric pairwise dissimilarities with a zero diagonal."""

    values: np.ndarray
    measure: MeasureSpec


def affinity_matrix(X, measure: MeasureSpec) -> AffinityMatrix:
    """Pairwise dissimilarities of a vector collection (rows of X)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    values = np.zeros((n, n))
    for i in range(n - 1):
        try:
            row = distances_to_point(measure, X[i + 1 :], X[i])
        except (ZeroVectorError, ZeroDenominatorError, DimensionMismatchError) as exc:
            raise type(exc)(f"rows after {i}: {exc}") from exc
        values[i, i + 1 :] = row
        values[i + 1 :, i] = row
    return AffinityMatrix(values, measure)


def _upper_triangle(values: np.ndarray) -> np.ndarray:
    iu = np.triu_indices(values.shape[0], k=1)
    return values[iu]


def distinctiveness_correlation(X, measure: MeasureSpec) -> float:
    """Pearson correlation of a measure's affinities vs the Hamming baseline.

    Both affinity matrices are reduced to their strict upper triangles
    (each unordered pair counted once, diagonal excluded).
    """
    X = np.asarray(X, dtype=float)
    if X.shape[0] < 3:
        raise InsufficientDataError("need at least 3 vectors for a correlation")
    a = _upper_triangle(affinity_matrix(X, measure).values)
    h = _upper_triangle(affinity_matrix(X, MeasureSpec("hamming")).values)
    sa, sh = a.std(), h.std()
    if sa == 0.0 or sh == 0.0:
        raise DegenerateDataError("affinity entries are constant; correlation undefined")
    r = float(np.mean((a - a.mean()) * (h - h.mean())) / (sa * sh))
    return max(-1.0, min(1.0, r))


def neighbor_counts(affinity: AffinityMatrix, eps: float) -> np.ndarray:
    """Per-point count of others within (1+eps) x (own nearest distance)."""
    values = affinity.values
    n = values.shape[0]
    if n < 2:
        raise InsufficientDataError("need at least 2 points")
    counts = np.empty(n)
    for q in range(n):
        row = np.delete(values[q], q)
        dmin = row.min()
        counts[q] = np.count_nonzero(row <= (1.0 + eps) * dmin)
    return counts


def avg_neighbor_count(X, measure: MeasureSpec, eps: float) -> float:
    """Mean neighbor count over all points at relative radius 1+eps.

    For each point the nearest other point sets the unit distance; every
    other point within (1+eps) of it (boundary inclusive) is a neighbor.
    """
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    return float(neighbor_counts(affinity_matrix(X, measure), eps).mean())


def avg_neighbor_count_grid(X, measure: MeasureSpec, eps_values) -> list[float]:
    """avg_neighbor_count over several eps values, one affinity build."""
    affinity = affinity_matrix(X, measure)
    return [float(neighbor_counts(affinity, eps).mean()) for eps in eps_values]


def data_variance(X) -> float:
    """Mean over dimensions of the per-dimension population variance."""
    X = np.asarray(X, dtype=float)
    if X.shape[0] < 2:
        raise InsufficientDataError("need at least 2 vectors")
    return float(np.var(X, axis=0).mean())
