import json
import math

import numpy as np
import pytest
from scipy.stats import chi2

from vsakit.codebook import (
    Codebook,
    Kind,
    binomial_chisquare_pvalue,
    dot_statistics,
    generate,
    max_coherence,
    normalized_dot,
)


def binom_pmf(d: int) -> np.ndarray:
    # Independent oracle: exact Binomial(d, 1/2) pmf from binomial coefficients.
    return np.array([math.comb(d, j) for j in range(d + 1)], dtype=float) / 2.0**d


class TestGenerate:
    def test_orthonormal_by_construction(self):
        cb = generate(Kind.ORTHONORMAL, d=3, m=3, seed=123)
        gram = cb.vectors @ cb.vectors.T
        assert np.max(np.abs(gram - np.eye(3))) <= 1e-10
        assert np.max(np.abs(np.linalg.norm(cb.vectors, axis=1) - 1.0)) <= 1e-12

    def test_orthonormal_gram_is_identity_larger(self):
        cb = generate(Kind.ORTHONORMAL, d=16, m=12, seed=5)
        gram = cb.vectors @ cb.vectors.T
        assert np.max(np.abs(gram - np.eye(12))) <= 1e-10

    def test_canonical_basis(self):
        cb = generate(Kind.ORTHONORMAL, d=5, m=3, seed=0, canonical=True)
        np.testing.assert_array_equal(cb.vectors, np.eye(5)[:3])

    def test_rademacher_determinism(self):
        a = generate(Kind.RADEMACHER, d=4, m=2, seed=7)
        b = generate(Kind.RADEMACHER, d=4, m=2, seed=7)
        np.testing.assert_array_equal(a.vectors, b.vectors)
        c = generate(Kind.RADEMACHER, d=4, m=2, seed=8)
        assert not np.array_equal(a.vectors, c.vectors)

    def test_rademacher_entries(self):
        cb = generate(Kind.RADEMACHER, d=64, m=10, seed=3)
        assert np.all(np.abs(cb.vectors) == 1.0)

    def test_large_d_dots_concentrate(self):
        # Monte Carlo: |Z| < 0.1 should hold for at least 99% of seeds.
        hits = 0
        n_seeds = 1000
        for seed in range(n_seeds):
            cb = generate(Kind.RADEMACHER, d=10000, m=2, seed=seed)
            z = normalized_dot(cb.vec(0), cb.vec(1), scaled=True)
            hits += abs(z) < 0.1
        assert hits / n_seeds >= 0.99

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            generate(Kind.RADEMACHER, d=0, m=1, seed=0)
        with pytest.raises(ValueError):
            generate(Kind.RADEMACHER, d=4, m=0, seed=0)
        with pytest.raises(ValueError):
            generate(Kind.ORTHONORMAL, d=3, m=4, seed=0)
        with pytest.raises(ValueError):
            generate(Kind.RADEMACHER, d=4, m=2, seed=-1)
        with pytest.raises(ValueError):
            generate(Kind.RADEMACHER, d=4, m=2, seed=1 << 64)

    def test_json_roundtrip_regenerates_bitwise(self):
        for kind in (Kind.RADEMACHER, Kind.ORTHONORMAL):
            cb = generate(kind, d=8, m=6, seed=42)
            clone = Codebook.from_json(cb.to_json())
            assert clone.kind is kind
            np.testing.assert_array_equal(clone.vectors, cb.vectors)
        payload = json.loads(generate(Kind.RADEMACHER, d=8, m=6, seed=42).to_json())
        assert payload == {"kind": "rademacher", "d": 8, "m": 6, "seed": 42}


class TestNormalizedDot:
    def test_self_dot_is_one(self):
        u = np.array([1.0, 1.0, 1.0, 1.0])
        assert normalized_dot(u, u, scaled=True) == 1.0

    def test_orthogonal_pairs(self):
        assert normalized_dot([1, 1, -1, -1], [1, -1, 1, -1], scaled=True) == 0.0
        assert normalized_dot([1, 1], [1, -1], scaled=True) == 0.0

    def test_unscaled(self):
        assert normalized_dot([1.0, 2.0], [3.0, 4.0], scaled=False) == 11.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            normalized_dot([1.0, 1.0], [1.0, 1.0, 1.0])


class TestDotStatistics:
    def test_variance_matches_inverse_dimension(self):
        stats = dot_statistics(d=100, n_pairs=100000, seed=11)
        assert 0.0085 <= stats.sample_variance <= 0.0115

    def test_single_coordinate(self):
        stats = dot_statistics(d=1, n_pairs=1000, seed=2)
        # every Z is +1 or -1, so the shifted histogram lives on {0, 1}
        assert stats.histogram.shape == (2,)
        assert stats.histogram.sum() == 1000
        assert stats.max_abs_offdiag == 1.0

    def test_histogram_counts_and_support(self):
        d, n_pairs = 31, 2000
        stats = dot_statistics(d=d, n_pairs=n_pairs, seed=9)
        assert stats.histogram.sum() == n_pairs
        assert len(stats.histogram) == d + 1
        assert np.all(stats.histogram >= 0)

    def test_mean_concentration(self):
        d, n_pairs = 64, 5000
        stats = dot_statistics(d=d, n_pairs=n_pairs, seed=17)
        assert abs(stats.sample_mean) <= 4.0 * math.sqrt(1.0 / (d * n_pairs))

    def test_chi_square_against_exact_binomial(self):
        # Oracle: exact pmf, tail bins merged below expected count 5,
        # chi-square survival function evaluated directly.
        d, n_pairs = 16, 100000
        stats = dot_statistics(d=d, n_pairs=n_pairs, seed=101)
        expected = n_pairs * binom_pmf(d)
        obs_m, exp_m = [], []
        o = e = 0.0
        for oj, ej in zip(stats.histogram, expected):
            o += oj
            e += ej
            if e >= 5.0:
                obs_m.append(o)
                exp_m.append(e)
                o = e = 0.0
        obs_m[-1] += o
        exp_m[-1] += e
        obs_arr, exp_arr = np.array(obs_m), np.array(exp_m)
        stat = float(((obs_arr - exp_arr) ** 2 / exp_arr).sum())
        p_oracle = float(chi2.sf(stat, df=len(obs_arr) - 1))
        assert p_oracle >= 0.01
        # library helper must agree with the hand computation
        assert binomial_chisquare_pvalue(stats.histogram) == pytest.approx(p_oracle, rel=1e-12)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            dot_statistics(d=0, n_pairs=10, seed=0)
        with pytest.raises(ValueError):
            dot_statistics(d=4, n_pairs=0, seed=0)


class TestMaxCoherence:
    def test_orthonormal_codebook(self):
        cb = generate(Kind.ORTHONORMAL, d=8, m=8, seed=1)
        assert max_coherence(cb) <= 1e-10

    def test_repeated_embedding(self):
        v = generate(Kind.RADEMACHER, d=16, m=1, seed=4).vec(0)
        cb = Codebook(kind=Kind.RADEMACHER, d=16, m=2, seed=4, vectors=np.vstack([v, v]))
        assert max_coherence(cb) == 1.0

    def test_requires_two_embeddings(self):
        cb = generate(Kind.RADEMACHER, d=8, m=1, seed=0)
        with pytest.raises(ValueError):
            max_coherence(cb)

    def test_monte_carlo_coherence_bound(self):
        # Union-bound regime: coherence of 50 codes at d=1024 stays
        # below 0.25 in at least 99% of seeds.
        hits = 0
        n_seeds = 500
        for seed in range(n_seeds):
            cb = generate(Kind.RADEMACHER, d=1024, m=50, seed=seed)
            hits += max_coherence(cb) < 0.25
        assert hits / n_seeds >= 0.99


class TestCodebookValidation:
    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            Codebook(kind=Kind.RADEMACHER, d=4, m=2, seed=0, vectors=np.ones((2, 3)))

    def test_non_pm1_rejected(self):
        with pytest.raises(ValueError):
            Codebook(kind=Kind.RADEMACHER, d=2, m=1, seed=0, vectors=np.array([[1.0, 0.5]]))

    def test_nonorthogonal_rejected(self):
        bad = np.array([[1.0, 0.0], [0.9999, math.sqrt(1 - 0.9999**2)]])
        with pytest.raises(ValueError):
            Codebook(kind=Kind.ORTHONORMAL, d=2, m=2, seed=0, vectors=bad)

    def test_vec_bounds(self):
        cb = generate(Kind.RADEMACHER, d=4, m=2, seed=0)
        with pytest.raises(ValueError):
            cb.vec(2)
