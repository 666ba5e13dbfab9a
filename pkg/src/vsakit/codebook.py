"""Seeded object codebooks and their dot-product statistics.

A codebook is an ordered set of ``m`` object embeddings of dimension
``d``.  Two kinds are supported:

* ``Kind.RADEMACHER``: entries are independent fair draws from
  ``{+1, -1}``.  Stored raw (unnormalized); the ``1/d`` scale lives in
  :func:`normalized_dot` and in detection-score metadata, which keeps
  the arithmetic integer-exact for testing.
* ``Kind.ORTHONORMAL``: rows of an orthonormal set (``m <= d``), built
  by modified Gram-Schmidt with a re-orthogonalization pass over a
  seeded Gaussian draw, or the canonical standard basis on request.

Codebooks are immutable and fully determined by ``(kind, d, m, seed)``,
so serialization stores only those fields and regenerates the values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.stats import chi2

from .rng import check_seed, stream

__all__ = [
    "Kind",
    "Codebook",
    "DotStatistics",
    "generate",
    "normalized_dot",
    "dot_statistics",
    "max_coherence",
    "binomial_chisquare_pvalue",
]

ORTHONORMAL_DOT_TOL = 1e-10
UNIT_NORM_TOL = 1e-12


class Kind(Enum):
    RADEMACHER = "rademacher"
    ORTHONORMAL = "orthonormal"


@dataclass(frozen=True, eq=False)
class Codebook:
    """``m`` embeddings of dimension ``d``, regenerable from the seed."""

    kind: Kind
    d: int
    m: int
    seed: int
    vectors: np.ndarray  # shape (m, d), float64
    canonical: bool = False  # orthonormal only: standard-basis rows

    def __post_init__(self):
        if self.d < 1 or self.m < 1:
            raise ValueError("codebook requires d >= 1 and m >= 1")
        check_seed(self.seed)
        v = self.vectors
        if v.shape != (self.m, self.d):
            raise ValueError(f"vectors must have shape ({self.m}, {self.d}), got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("codebook entries must be finite")
        if self.kind is Kind.RADEMACHER:
            if not np.all(np.abs(v) == 1.0):
                raise ValueError("Rademacher codebook entries must be +1 or -1")
        elif self.kind is Kind.ORTHONORMAL:
            if self.m > self.d:
                raise ValueError("orthonormal codebook requires m <= d")
            norms = np.linalg.norm(v, axis=1)
            if np.max(np.abs(norms - 1.0)) > UNIT_NORM_TOL:
                raise ValueError("orthonormal embeddings must have unit norm")
            gram = v @ v.T
            off = gram - np.diag(np.diag(gram))
            if np.max(np.abs(off)) > ORTHONORMAL_DOT_TOL:
                raise ValueError("orthonormal embeddings must be pairwise orthogonal")

    def vec(self, i: int) -> np.ndarray:
        """Embedding ``i`` as a 1-D float64 array."""
        if not 0 <= i < self.m:
            raise ValueError(f"embedding index {i} out of range [0, {self.m})")
        return self.vectors[i]

    def to_json(self) -> str:
        """Serialize generation metadata; values are never stored."""
        payload = {"kind": self.kind.value, "d": self.d, "m": self.m, "seed": self.seed}
        if self.canonical:
            payload["canonical"] = True
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "Codebook":
        payload = json.loads(text)
        return generate(
            Kind(payload["kind"]),
            payload["d"],
            payload["m"],
            payload["seed"],
            canonical=payload.get("canonical", False),
        )


def _orthonormal_columns(g: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt with a second (re-orthogonalization) pass."""
    d, m = g.shape
    q = g.astype(np.float64, copy=True)
    for i in range(m):
        for _ in range(2):
            for j in range(i):
                q[:, i] -= (q[:, j] @ q[:, i]) * q[:, j]
        norm = np.linalg.norm(q[:, i])
        if norm < 1e-8:
            raise RuntimeError("degenerate Gaussian draw during orthonormalization")
        q[:, i] /= norm
    return q


def generate(kind: Kind, d: int, m: int, seed: int, *, canonical: bool = False) -> Codebook:
    """Generate the codebook determined by ``(kind, d, m, seed)``.

    Deterministic in all arguments: the same inputs reproduce identical
    values bit-for-bit.  ``canonical=True`` (orthonormal kind only)
    returns the first ``m`` standard-basis vectors instead of a seeded
    random orthonormal set.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    check_seed(seed)
    if kind is Kind.RADEMACHER:
        if canonical:
            raise ValueError("canonical basis is only defined for the orthonormal kind")
        bits = stream(seed, "codebook").integers(0, 2, size=(m, d), dtype=np.int8)
        vectors = (2.0 * bits - 1.0).astype(np.float64)
    elif kind is Kind.ORTHONORMAL:
        if m > d:
            raise ValueError(f"orthonormal kind requires m <= d, got m={m}, d={d}")
        if canonical:
            vectors = np.eye(d, dtype=np.float64)[:m].copy()
        else:
            g = stream(seed, "codebook").standard_normal((d, m))
            vectors = _orthonormal_columns(g).T.copy()
    else:
        raise ValueError(f"unknown codebook kind: {kind!r}")
    return Codebook(kind=kind, d=d, m=m, seed=int(seed), vectors=vectors, canonical=canonical)


def normalized_dot(u: np.ndarray, v: np.ndarray, scaled: bool = True) -> float:
    """Dot product of two embeddings, divided by ``d`` when ``scaled``.

    ``scaled=True`` is the convention for raw Rademacher codes; pass
    ``scaled=False`` for codes that already carry unit scale (such as
    orthonormal embeddings).  The scale is an explicit caller choice;
    nothing is inferred from the inputs.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    dot = float(u @ v)
    return dot / u.size if scaled else dot


@dataclass(frozen=True, eq=False)
class DotStatistics:
    """Statistics of the normalized dot Z over sampled Rademacher pairs.

    ``histogram[j]`` counts samples with ``d(Z+1)/2 == j`` for
    ``j in [0, d]``; that shifted value is an integer for every pair.
    """

    sample_mean: float
    sample_variance: float
    max_abs_offdiag: float
    histogram: np.ndarray  # int64, length d + 1

    def __post_init__(self):
        if self.sample_variance < 0:
            raise ValueError("variance cannot be negative")

    @property
    def n_pairs(self) -> int:
        return int(self.histogram.sum())

    @property
    def d(self) -> int:
        return len(self.histogram) - 1

    def to_dict(self) -> dict:
        return {
            "sample_mean": self.sample_mean,
            "sample_variance": self.sample_variance,
            "max_abs_offdiag": self.max_abs_offdiag,
            "histogram": [int(c) for c in self.histogram],
        }


def dot_statistics(d: int, n_pairs: int, seed: int) -> DotStatistics:
    """Sample ``n_pairs`` independent Rademacher pairs and summarize Z.

    Z is the dot product scaled by ``1/d``; the variance reported is the
    population variance of the sampled Z values.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if n_pairs < 1:
        raise ValueError(f"n_pairs must be >= 1, got {n_pairs}")
    rng = stream(seed, "dot-stats")
    u = rng.integers(0, 2, size=(n_pairs, d), dtype=np.int8) * np.int8(2) - np.int8(1)
    v = rng.integers(0, 2, size=(n_pairs, d), dtype=np.int8) * np.int8(2) - np.int8(1)
    dots = (u * v).sum(axis=1, dtype=np.int64)
    z = dots / d
    shifted = (dots + d) // 2  # = d(Z+1)/2, exact integer in [0, d]
    histogram = np.bincount(shifted, minlength=d + 1).astype(np.int64)
    return DotStatistics(
        sample_mean=float(z.mean()),
        sample_variance=float(z.var()),
        max_abs_offdiag=float(np.abs(z).max()),
        histogram=histogram,
    )


def max_coherence(cb: Codebook) -> float:
    """Maximum absolute normalized dot over all distinct pairs.

    Rademacher codebooks are scaled by ``1/d``; orthonormal ones are
    already at unit scale.
    """
    if cb.m < 2:
        raise ValueError("coherence requires at least two embeddings")
    gram = cb.vectors @ cb.vectors.T
    np.fill_diagonal(gram, 0.0)
    scale = cb.d if cb.kind is Kind.RADEMACHER else 1
    return float(np.abs(gram).max() / scale)


def _merge_sparse_bins(observed, expected, min_expected: float = 5.0):
    # Chi-square approximation needs a floor on expected counts; fold
    # sparse bins into their neighbor.
    obs_merged, exp_merged = [], []
    o_acc = e_acc = 0.0
    for o, e in zip(observed, expected):
        o_acc += o
        e_acc += e
        if e_acc >= min_expected:
            obs_merged.append(o_acc)
            exp_merged.append(e_acc)
            o_acc = e_acc = 0.0
    if e_acc > 0:
        if exp_merged:
            obs_merged[-1] += o_acc
            exp_merged[-1] += e_acc
        else:
            obs_merged.append(o_acc)
            exp_merged.append(e_acc)
    return np.asarray(obs_merged), np.asarray(exp_merged)


def binomial_chisquare_pvalue(histogram: np.ndarray) -> float:
    """Goodness-of-fit p-value of a Z histogram against Binomial(d, 1/2).

    The histogram must be indexed by ``d(Z+1)/2`` as produced by
    :func:`dot_statistics`.  Bins with expected count below 5 are merged
    before the test.
    """
    histogram = np.asarray(histogram)
    d = len(histogram) - 1
    if d < 1:
        raise ValueError("histogram must cover support [0, d] with d >= 1")
    n = int(histogram.sum())
    if n < 1:
        raise ValueError("histogram is empty")
    pmf = np.array([math.comb(d, j) for j in range(d + 1)], dtype=np.float64) / (2.0**d)
    observed, expected = _merge_sparse_bins(histogram.astype(np.float64), n * pmf)
    if len(observed) < 2:
        raise ValueError("too few usable bins for a chi-square test")
    stat = float(((observed - expected) ** 2 / expected).sum())
    return float(chi2.sf(stat, df=len(observed) - 1))
