import math

import numpy as np
import pytest

from occ2vec.dimred import (
    Embedding2D,
    TsneConfig,
    conditional_affinities,
    joint_affinities,
    kl_divergence,
    pca_fit_transform,
    pca_reconstruct,
    tsne,
)
from occ2vec.errors import InputError


def pca_eig_oracle(X, k):
    """Independent covariance eigendecomposition via numpy's general solver."""
    Xc = X - X.mean(axis=0)
    cov = np.cov(Xc, rowvar=False, ddof=1)
    eigvals, eigvecs = np.linalg.eig(cov)
    order = np.argsort(eigvals.real)[::-1][:k]
    return Xc @ eigvecs[:, order].real


class TestPca:
    def test_rank_one_data(self):
        t = np.linspace(-3, 3, 25)
        X = np.column_stack([2 * t + 1, -0.5 * t + 4])
        model, scores = pca_fit_transform(X, 1)
        total = np.var(X - X.mean(0), axis=0, ddof=1).sum()
        assert model.explained_variance[0] == pytest.approx(total, rel=1e-10)
        recon = pca_reconstruct(model, scores)
        assert np.max(np.abs(recon - X)) < 1e-10

    def test_full_rank_reconstruction(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((20, 6))
        model, scores = pca_fit_transform(X, 6)
        assert np.max(np.abs(pca_reconstruct(model, scores) - X)) < 1e-8

    def test_matches_eigen_oracle_up_to_sign(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((20, 6))
        _model, scores = pca_fit_transform(X, 6)
        oracle = pca_eig_oracle(X, 6)
        assert np.max(np.abs(np.abs(scores) - np.abs(oracle))) < 1e-8

    def test_orthonormal_components(self):
        rng = np.random.default_rng(2)
        X = rng.standard_normal((30, 8))
        model, _ = pca_fit_transform(X, 5)
        gram = model.components @ model.components.T
        assert np.max(np.abs(gram - np.eye(5))) < 1e-8

    def test_explained_variance_descending_and_bounded(self):
        rng = np.random.default_rng(3)
        X = rng.standard_normal((40, 10)) * np.arange(1, 11)
        model, _ = pca_fit_transform(X, 10)
        ev = model.explained_variance
        assert np.all(np.diff(ev) <= 1e-12)
        total = np.var(X - X.mean(0), axis=0, ddof=1).sum()
        assert ev.sum() <= total + 1e-8

    def test_gram_dual_path_matches_covariance_path(self):
        rng = np.random.default_rng(4)
        X = rng.standard_normal((8, 20))  # d > n triggers the dual path
        model, scores = pca_fit_transform(X, 5)
        gram = model.components @ model.components.T
        assert np.max(np.abs(gram - np.eye(5))) < 1e-8
        oracle = pca_eig_oracle(X, 5)
        assert np.max(np.abs(np.abs(scores) - np.abs(oracle))) < 1e-8

    def test_affine_subspace_zero_reconstruction(self):
        rng = np.random.default_rng(5)
        basis = rng.standard_normal((3, 12))
        coef = rng.standard_normal((25, 3))
        X = coef @ basis + rng.standard_normal(12)
        model, scores = pca_fit_transform(X, 3)
        assert np.max(np.abs(pca_reconstruct(model, scores) - X)) < 1e-8

    def test_sign_convention(self):
        rng = np.random.default_rng(6)
        X = rng.standard_normal((15, 4))
        model, _ = pca_fit_transform(X, 4)
        for row in model.components:
            assert row[np.argmax(np.abs(row))] > 0

    def test_k_out_of_range(self):
        X = np.random.default_rng(0).standard_normal((10, 4))
        with pytest.raises(InputError):
            pca_fit_transform(X, 0)
        with pytest.raises(InputError):
            pca_fit_transform(X, 5)


class TestKl:
    def test_identical_is_zero(self):
        p = np.array([0.25, 0.25, 0.5])
        assert kl_divergence(p, p) == 0.0

    def test_single_term(self):
        assert kl_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(
            math.log(2), abs=1e-12
        )

    def test_zero_q_where_p_positive(self):
        with pytest.raises(InputError):
            kl_divergence([0.5, 0.5], [1.0, 0.0])

    def test_nonnegative_on_random_pairs(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            p = rng.uniform(0.01, 1, 10)
            p /= p.sum()
            q = rng.uniform(0.01, 1, 10)
            q /= q.sum()
            assert kl_divergence(p, q) >= 0.0

    def test_requires_distribution(self):
        with pytest.raises(InputError):
            kl_divergence([0.5, 0.2], [0.5, 0.5])


class TestAffinities:
    def test_perplexity_calibration(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((40, 5))
        sq = np.sum((X[:, None] - X[None, :]) ** 2, axis=2)
        for perplexity in (5.0, 12.0, 13.0):
            cond, _betas = conditional_affinities(sq, perplexity)
            for i in range(40):
                p = cond[i][cond[i] > 0]
                h = -np.sum(p * np.log2(p))
                assert abs(2**h - perplexity) < 1e-4 * perplexity

    def test_joint_matrix_properties(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((25, 4))
        P = joint_affinities(X, 6.0)
        assert P.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.max(np.abs(P - P.T)) < 1e-15
        assert np.all(P >= 0)
        assert np.all(np.diag(P) == 0)


def _two_clusters(n_per, separation, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.normal(0.0, 1.0, (n_per, 5))
    b = rng.normal(0.0, 1.0, (n_per, 5))
    b[:, 0] += separation
    return np.vstack([a, b])


class TestTsne:
    def test_shape_and_centroid(self):
        X = _two_clusters(8, 6.0)
        out = tsne(X, TsneConfig(perplexity=4, iterations=120, seed=0))
        assert out.points.shape == (16, 2)
        assert np.max(np.abs(out.points.mean(axis=0))) < 1e-6

    def test_bitwise_determinism(self):
        X = _two_clusters(8, 6.0, seed=3)
        config = TsneConfig(perplexity=4, iterations=150, seed=11)
        a = tsne(X, config)
        b = tsne(X, config)
        assert a.points.tobytes() == b.points.tobytes()
        assert a.final_kl == b.final_kl

    def test_progress_made(self):
        X = _two_clusters(10, 8.0, seed=4)
        out = tsne(
            X,
            TsneConfig(perplexity=5, iterations=300, early_phase_iters=100, seed=2),
        )
        assert out.final_kl < out.initial_kl

    def test_planted_clusters_separable(self):
        # learning rate per the n/exaggeration/4 auto rule, floored at 50;
        # the 200 default targets point counts in the hundreds
        X = _two_clusters(30, 10.0, seed=5)
        out = tsne(
            X,
            TsneConfig(perplexity=10, iterations=1000, learning_rate=50.0, seed=0),
        )
        a, b = out.points[:30], out.points[30:]
        direction = b.mean(axis=0) - a.mean(axis=0)
        pa = a @ direction
        pb = b @ direction
        assert pa.max() < pb.min()  # positive margin along the mean axis

    def test_duplicate_points_jittered(self):
        rng = np.random.default_rng(6)
        spread = rng.standard_normal((6, 3))
        X = np.vstack([np.zeros((6, 3)), spread])
        out = tsne(X, TsneConfig(perplexity=3, iterations=60, seed=0))
        assert np.all(np.isfinite(out.points))

    def test_perplexity_bound_enforced(self):
        X = np.random.default_rng(0).standard_normal((10, 3))
        with pytest.raises(InputError, match="perplexity"):
            tsne(X, TsneConfig(perplexity=3.1, iterations=10, seed=0))

    def test_labels_attached(self):
        X = _two_clusters(4, 5.0)
        labels = [f"p{i}" for i in range(8)]
        out = tsne(X, TsneConfig(perplexity=2, iterations=50, seed=0), labels=labels)
        coords = out.coordinates()
        assert set(coords) == set(labels)

    def test_embedding2d_is_frozen_record(self):
        X = _two_clusters(4, 5.0)
        out = tsne(X, TsneConfig(perplexity=2, iterations=30, seed=0))
        assert isinstance(out, Embedding2D)
        assert out.final_kl >= 0.0
