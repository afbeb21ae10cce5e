"""Visualization pipeline: PCA to k dimensions, then exact t-SNE to two.

The t-SNE here is the exact O(n^2) variant: per-point Gaussian bandwidths
calibrated by binary search on perplexity, symmetrized joint affinities,
Student-t low-dimensional kernel, and momentum gradient descent with early
exaggeration. Everything is deterministic given the seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InputError, NumericalError


@dataclass(frozen=True)
class PcaModel:
    mean_vector: np.ndarray
    components: np.ndarray  # (k, d), rows orthonormal
    explained_variance: np.ndarray  # (k,), descending


@dataclass(frozen=True)
class TsneConfig:
    perplexity: float = 30.0
    iterations: int = 1000
    learning_rate: float = 200.0
    early_exaggeration: float = 12.0
    early_phase_iters: int = 250
    momentum_initial: float = 0.5
    momentum_final: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if self.perplexity <= 1.0:
            raise InputError("perplexity must exceed 1")
        if self.iterations < 1 or self.learning_rate <= 0:
            raise InputError("iterations and learning rate must be positive")


@dataclass(frozen=True)
class Embedding2D:
    labels: tuple[str, ...]
    points: np.ndarray  # (n, 2)
    final_kl: float
    initial_kl: float

    def coordinates(self) -> dict[str, tuple[float, float]]:
        return {
            lab: (float(x), float(y))
            for lab, (x, y) in zip(self.labels, self.points)
        }


# ---------------------------------------------------------------------------
# PCA


def pca_fit_transform(X: np.ndarray, k: int) -> tuple[PcaModel, np.ndarray]:
    """Center, project onto the top-k covariance eigendirections.

    Uses the Gram-matrix dual when d > n. Each component's
    largest-magnitude entry is flipped positive for reproducible output.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise InputError("X must be a matrix with at least two rows")
    n, d = X.shape
    if not (1 <= k <= min(n - 1, d)):
        raise InputError(f"k={k} outside [1, {min(n - 1, d)}]")
    mean = X.mean(axis=0)
    Xc = X - mean

    if d <= n:
        cov = Xc.T @ Xc / (n - 1)
        eigvals, eigvecs = np.linalg.eigh(cov)
        order = np.argsort(eigvals)[::-1][:k]
        variance = eigvals[order]
        components = eigvecs[:, order].T
    else:
        gram = Xc @ Xc.T / (n - 1)
        eigvals, eigvecs = np.linalg.eigh(gram)
        order = np.argsort(eigvals)[::-1][:k]
        variance = eigvals[order]
        if np.any(variance <= 1e-12 * max(eigvals.max(), 1.0)):
            raise NumericalError("requested more components than the data's rank")
        components = (Xc.T @ eigvecs[:, order] / np.sqrt(variance * (n - 1))).T

    variance = np.clip(variance, 0.0, None)
    for row in range(k):
        pivot = int(np.argmax(np.abs(components[row])))
        if components[row, pivot] < 0:
            components[row] = -components[row]
    scores = Xc @ components.T
    model = PcaModel(
        mean_vector=mean, components=components, explained_variance=variance
    )
    return model, scores


def pca_reconstruct(model: PcaModel, scores: np.ndarray) -> np.ndarray:
    return scores @ model.components + model.mean_vector


# ---------------------------------------------------------------------------
# KL divergence


def kl_divergence(P: np.ndarray, Q: np.ndarray) -> float:
    """Sum of p*log(p/q) over matching entries; p=0 terms contribute zero."""
    p = np.asarray(P, dtype=np.float64).ravel()
    q = np.asarray(Q, dtype=np.float64).ravel()
    if p.shape != q.shape:
        raise InputError(f"shape mismatch: {p.shape} vs {q.shape}")
    if np.any(p < 0) or np.any(q < 0):
        raise InputError("distributions must be nonnegative")
    if abs(p.sum() - 1.0) > 1e-6 or abs(q.sum() - 1.0) > 1e-6:
        raise InputError("distributions must sum to one")
    support = p > 0
    if np.any(q[support] == 0.0):
        raise InputError("Q must be positive wherever P is positive")
    value = float(np.sum(p[support] * np.log(p[support] / q[support])))
    return max(value, 0.0)


# ---------------------------------------------------------------------------
# t-SNE


class _CalibrationFailure(Exception):
    pass


def conditional_affinities(
    sq_dists: np.ndarray,
    perplexity: float,
    tol: float = 1e-5,
    max_steps: int = 200,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-row Gaussian affinities with bandwidth chosen by binary search.

    Returns the row-conditional probability matrix (zero diagonal) and the
    per-row precisions. Raises when a row cannot reach the target
    perplexity, which happens with exactly duplicated points.
    """
    n = sq_dists.shape[0]
    P = np.zeros((n, n))
    betas = np.empty(n)
    for i in range(n):
        d = np.delete(sq_dists[i], i)
        d = d - d.min()  # shift-invariant after normalization
        beta, lo, hi = 1.0, 0.0, np.inf

        def row_perp(b: float) -> tuple[float, np.ndarray]:
            w = np.exp(-d * b)
            total = w.sum()
            if total <= 0 or not np.isfinite(total):
                return 1.0, np.full_like(d, 1.0 / len(d))
            p = w / total
            nz = p > 0
            h = -np.sum(p[nz] * np.log2(p[nz]))
            return float(2.0**h), p

        perp_hat, p = row_perp(beta)
        for _ in range(max_steps):
            if abs(perp_hat - perplexity) < tol:
                break
            if perp_hat > perplexity:
                lo = beta
                beta = beta * 2.0 if hi == np.inf else (beta + hi) / 2.0
            else:
                hi = beta
                beta = beta / 2.0 if lo == 0.0 else (beta + lo) / 2.0
            perp_hat, p = row_perp(beta)
        if abs(perp_hat - perplexity) >= tol:
            raise _CalibrationFailure(f"row {i} stuck at perplexity {perp_hat}")
        betas[i] = beta
        P[i, np.arange(n) != i] = p
    return P, betas


def joint_affinities(X: np.ndarray, perplexity: float) -> np.ndarray:
    """Symmetrized joint probabilities from pairwise distances."""
    sq = _pairwise_sq_dists(X)
    cond, _ = conditional_affinities(sq, perplexity)
    n = X.shape[0]
    return (cond + cond.T) / (2.0 * n)


def _pairwise_sq_dists(X: np.ndarray) -> np.ndarray:
    norms = np.sum(X * X, axis=1)
    sq = norms[:, None] + norms[None, :] - 2.0 * (X @ X.T)
    np.fill_diagonal(sq, 0.0)
    return np.clip(sq, 0.0, None)


def _low_dim_q(Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    num = 1.0 / (1.0 + _pairwise_sq_dists(Y))
    np.fill_diagonal(num, 0.0)
    return num / num.sum(), num


def tsne(
    X: np.ndarray,
    config: TsneConfig,
    labels: Optional[Sequence[str]] = None,
) -> Embedding2D:
    """Exact t-SNE to two dimensions."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 4:
        raise InputError("t-SNE needs a matrix with at least four rows")
    n = X.shape[0]
    if not config.perplexity < (n - 1) / 3.0:
        raise InputError(
            f"perplexity {config.perplexity} must be below (n-1)/3 = {(n - 1) / 3:.2f}"
        )
    if labels is None:
        labels = tuple(str(i) for i in range(n))
    elif len(labels) != n:
        raise InputError(f"{len(labels)} labels for {n} points")

    rng = np.random.default_rng(config.seed)
    try:
        P = joint_affinities(X, config.perplexity)
    except _CalibrationFailure:
        X = X + rng.normal(0.0, 1e-10, X.shape)
        try:
            P = joint_affinities(X, config.perplexity)
        except _CalibrationFailure as exc:
            raise NumericalError(f"bandwidth search diverged after jitter: {exc}")

    Y = rng.normal(0.0, 1e-4, (n, 2))
    Q0, _ = _low_dim_q(Y)
    initial_kl = kl_divergence(P, Q0)

    velocity = np.zeros_like(Y)
    gains = np.ones_like(Y)
    for it in range(config.iterations):
        factor = config.early_exaggeration if it < config.early_phase_iters else 1.0
        Q, num = _low_dim_q(Y)
        M = (factor * P - Q) * num
        grad = 4.0 * (M.sum(axis=1)[:, None] * Y - M @ Y)
        momentum = (
            config.momentum_initial
            if it < config.early_phase_iters
            else config.momentum_final
        )
        # per-coordinate gains as in the reference implementation: grow when
        # the gradient opposes the velocity, shrink when it agrees
        flipped = (grad > 0) != (velocity > 0)
        gains = np.where(flipped, gains + 0.2, gains * 0.8)
        np.clip(gains, 0.01, None, out=gains)
        velocity = momentum * velocity - config.learning_rate * (gains * grad)
        Y = Y + velocity
        Y = Y - Y.mean(axis=0)

    Q, _ = _low_dim_q(Y)
    final_kl = kl_divergence(P, Q)
    if not np.all(np.isfinite(Y)):
        raise NumericalError("t-SNE diverged to non-finite coordinates")
    return Embedding2D(
        labels=tuple(labels), points=Y, final_kl=final_kl, initial_kl=initial_kl
    )
