"""Binding operators over object embeddings.

Three backends build an order-``n`` bound representation from ``n``
embeddings of dimension ``d``:

* ``Backend.TENSOR``: the iterated outer product; ``d**n`` values,
  stored flat in row-major order (last index fastest).  Unbinding
  contracts the first (left) or last (right) mode and is exact for
  orthonormal embeddings.
* ``Backend.HADAMARD``: the entrywise product; ``d`` values.  Unbinding
  multiplies entrywise again, which inverts binding only for +/-1 codes.
* ``Backend.CONVOLUTION``: iterated circular convolution; ``d`` values.
  Unbinding applies circular correlation and is only approximate.

Every operator is linear in each argument, so all of them respect
superposition: binding or unbinding a weighted sum equals the weighted
sum of bindings or unbindings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .codebook import Codebook, Kind

__all__ = [
    "Backend",
    "BoundRep",
    "tensor_bind",
    "tensor_unbind_left",
    "tensor_unbind_right",
    "tensor_detect",
    "hadamard_bind",
    "hadamard_unbind",
    "hadamard_detect",
    "conv_bind",
    "conv_unbind",
    "circular_convolve",
    "circular_correlate",
    "hadamard_from_tensor",
    "bind",
    "detect",
    "detection_scale",
    "detection_rank",
]

RANK_SIZE_GUARD = 4096
RANK_SV_TOL = 1e-8  # relative to the largest singular value


class Backend(Enum):
    TENSOR = "tensor"
    HADAMARD = "hadamard"
    CONVOLUTION = "convolution"


@dataclass(frozen=True, eq=False)
class BoundRep:
    """A bound representation: flat values plus backend/order/dim tags."""

    backend: Backend
    order: int
    dim: int
    values: np.ndarray  # 1-D float64; length dim**order (tensor) or dim

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.values.ndim != 1:
            raise ValueError("values must be a flat 1-D array")
        expected = self.dim**self.order if self.backend is Backend.TENSOR else self.dim
        if self.values.size != expected:
            raise ValueError(
                f"{self.backend.value} rep of order {self.order}, dim {self.dim} "
                f"needs {expected} values, got {self.values.size}"
            )

    def as_tensor(self) -> np.ndarray:
        """Row-major view of a tensor rep with shape ``(dim,) * order``."""
        if self.backend is not Backend.TENSOR:
            raise ValueError("as_tensor is only defined for the tensor backend")
        return self.values.reshape((self.dim,) * self.order)


def _embedding(v) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("an embedding must be a non-empty 1-D vector")
    return arr


def _embedding_tuple(vs) -> list[np.ndarray]:
    vs = [_embedding(v) for v in vs]
    if not vs:
        raise ValueError("cannot bind an empty tuple")
    d = vs[0].size
    for v in vs[1:]:
        if v.size != d:
            raise ValueError(f"dimension mismatch inside tuple: {v.size} vs {d}")
    return vs


def _check_dim(u: np.ndarray, rep: BoundRep):
    if u.size != rep.dim:
        raise ValueError(f"dimension mismatch: embedding has {u.size}, rep has {rep.dim}")


# ---------------------------------------------------------------------------
# tensor backend
# ---------------------------------------------------------------------------

def tensor_bind(vs) -> BoundRep:
    """Outer product of the embeddings; order equals the tuple length."""
    vs = _embedding_tuple(vs)
    out = vs[0]
    for v in vs[1:]:
        out = np.multiply.outer(out, v)
    return BoundRep(Backend.TENSOR, len(vs), vs[0].size, out.reshape(-1))


def tensor_unbind_left(u, rep: BoundRep) -> BoundRep:
    """Contract ``u`` against the first mode, dropping the order by one."""
    u = _embedding(u)
    if rep.backend is not Backend.TENSOR:
        raise ValueError("tensor_unbind_left requires a tensor rep")
    if rep.order < 2:
        raise ValueError("unbinding requires order >= 2; use a detect operation at order 1")
    _check_dim(u, rep)
    out = np.tensordot(u, rep.as_tensor(), axes=([0], [0]))
    return BoundRep(Backend.TENSOR, rep.order - 1, rep.dim, out.reshape(-1))


def tensor_unbind_right(rep: BoundRep, u) -> BoundRep:
    """Contract ``u`` against the last mode, dropping the order by one."""
    u = _embedding(u)
    if rep.backend is not Backend.TENSOR:
        raise ValueError("tensor_unbind_right requires a tensor rep")
    if rep.order < 2:
        raise ValueError("unbinding requires order >= 2; use a detect operation at order 1")
    _check_dim(u, rep)
    out = np.tensordot(rep.as_tensor(), u, axes=([rep.order - 1], [0]))
    return BoundRep(Backend.TENSOR, rep.order - 1, rep.dim, out.reshape(-1))


def tensor_detect(vs, rep: BoundRep) -> float:
    """Full contraction of the query tuple against a tensor rep.

    Equals the product of slotwise dot products when the rep is the
    outer product of a tuple.
    """
    vs = _embedding_tuple(vs)
    if rep.backend is not Backend.TENSOR:
        raise ValueError("tensor_detect requires a tensor rep")
    if len(vs) != rep.order:
        raise ValueError(f"query order {len(vs)} does not match rep order {rep.order}")
    _check_dim(vs[0], rep)
    out = rep.as_tensor()
    for v in vs:
        out = np.tensordot(v, out, axes=([0], [0]))
    return float(out)


# ---------------------------------------------------------------------------
# Hadamard backend
# ---------------------------------------------------------------------------

def hadamard_bind(vs) -> BoundRep:
    """Entrywise product of the embeddings; order is tracked as metadata."""
    vs = _embedding_tuple(vs)
    out = vs[0].copy()
    for v in vs[1:]:
        out *= v
    return BoundRep(Backend.HADAMARD, len(vs), out.size, out)


def hadamard_unbind(u, rep: BoundRep) -> BoundRep:
    """Entrywise product of ``u`` with the rep.

    Inverts binding exactly only for +/-1 codes.  The result order drops
    by one but never below one: the payload is always a d-vector.
    """
    u = _embedding(u)
    if rep.backend is not Backend.HADAMARD:
        raise ValueError("hadamard_unbind requires a Hadamard rep")
    _check_dim(u, rep)
    return BoundRep(Backend.HADAMARD, max(rep.order - 1, 1), rep.dim, u * rep.values)


def hadamard_detect(vs, rep: BoundRep) -> float:
    """Unbind every query embedding entrywise, then sum the coordinates.

    Reported raw; the suppressed common factor is available from
    :func:`detection_scale`.
    """
    vs = _embedding_tuple(vs)
    if rep.backend is not Backend.HADAMARD:
        raise ValueError("hadamard_detect requires a Hadamard rep")
    if len(vs) != rep.order:
        raise ValueError(f"query order {len(vs)} does not match rep order {rep.order}")
    _check_dim(vs[0], rep)
    out = rep.values
    for v in vs:
        out = out * v
    return float(out.sum())


# ---------------------------------------------------------------------------
# circular-convolution backend
# ---------------------------------------------------------------------------

def circular_convolve(a, b, method: str = "direct") -> np.ndarray:
    """Circular convolution; ``method`` is ``direct`` (O(d^2)) or ``fft``."""
    a, b = _embedding(a), _embedding(b)
    if a.size != b.size:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    if method == "direct":
        d = a.size
        idx = (np.arange(d)[:, None] - np.arange(d)[None, :]) % d
        return b[idx] @ a
    if method == "fft":
        return np.real(np.fft.ifft(np.fft.fft(a) * np.fft.fft(b)))
    raise ValueError(f"unknown method: {method!r}")


def circular_correlate(u, c, method: str = "direct") -> np.ndarray:
    """Circular correlation of ``u`` with ``c`` (adjoint of convolution)."""
    u, c = _embedding(u), _embedding(c)
    if u.size != c.size:
        raise ValueError(f"dimension mismatch: {u.size} vs {c.size}")
    if method == "direct":
        d = u.size
        idx = (np.arange(d)[:, None] + np.arange(d)[None, :]) % d
        return c[idx] @ u
    if method == "fft":
        return np.real(np.fft.ifft(np.conj(np.fft.fft(u)) * np.fft.fft(c)))
    raise ValueError(f"unknown method: {method!r}")


def conv_bind(vs) -> BoundRep:
    """Iterated circular convolution of the embeddings."""
    vs = _embedding_tuple(vs)
    out = vs[0]
    for v in vs[1:]:
        out = circular_convolve(out, v)
    return BoundRep(Backend.CONVOLUTION, len(vs), vs[0].size, np.asarray(out, dtype=np.float64))


def conv_unbind(u, rep: BoundRep) -> BoundRep:
    """Circular correlation of ``u`` with the rep; approximate inverse only."""
    u = _embedding(u)
    if rep.backend is not Backend.CONVOLUTION:
        raise ValueError("conv_unbind requires a convolution rep")
    _check_dim(u, rep)
    return BoundRep(Backend.CONVOLUTION, max(rep.order - 1, 1), rep.dim, circular_correlate(u, rep.values))


# ---------------------------------------------------------------------------
# cross-backend helpers
# ---------------------------------------------------------------------------

def hadamard_from_tensor(rep: BoundRep) -> BoundRep:
    """Main diagonal of a tensor rep, as a Hadamard rep of the same order.

    This is the linear map that factors the Hadamard binding through the
    tensor product: applied to ``tensor_bind(vs)`` it returns exactly
    ``hadamard_bind(vs)``.
    """
    if rep.backend is not Backend.TENSOR:
        raise ValueError("hadamard_from_tensor requires a tensor rep")
    idx = np.arange(rep.dim)
    diag = rep.as_tensor()[(idx,) * rep.order]
    return BoundRep(Backend.HADAMARD, rep.order, rep.dim, np.array(diag, dtype=np.float64))


_BINDERS = {
    Backend.TENSOR: tensor_bind,
    Backend.HADAMARD: hadamard_bind,
    Backend.CONVOLUTION: conv_bind,
}


def bind(backend: Backend, vs) -> BoundRep:
    """Bind a tuple of embeddings with the given backend."""
    try:
        binder = _BINDERS[backend]
    except KeyError:
        raise ValueError(f"unknown backend: {backend!r}") from None
    return binder(vs)


def detect(vs, rep: BoundRep) -> float:
    """Detection score of a query tuple against a bound rep.

    For every backend this is the inner product of the rep with the
    bound query, which coincides with unbind-then-sum for the Hadamard
    backend and successive contraction for the tensor backend.
    """
    if rep.backend is Backend.TENSOR:
        return tensor_detect(vs, rep)
    if rep.backend is Backend.HADAMARD:
        return hadamard_detect(vs, rep)
    vs = _embedding_tuple(vs)
    if len(vs) != rep.order:
        raise ValueError(f"query order {len(vs)} does not match rep order {rep.order}")
    _check_dim(vs[0], rep)
    return float(conv_bind(vs).values @ rep.values)


def detection_scale(backend: Backend, kind: Kind, d: int, n: int) -> float:
    """Suppressed common factor behind raw detection scores.

    Raw Rademacher codes accumulate one ``1/d`` per unbind step or dot,
    so a full order-``n`` detection carries ``d**-n``; orthonormal codes
    under the tensor backend need no scaling.
    """
    if kind is Kind.ORTHONORMAL and backend is Backend.TENSOR:
        return 1.0
    return float(d) ** (-n)


def detection_rank(cb: Codebook, backend: Backend, n: int) -> int:
    """Numerical rank of the detection functionals of all ``n``-tuples.

    One row per tuple of codebook elements, written in coordinates of
    the bound space; the rank counts singular values above ``1e-8``
    relative to the largest.  Guarded to desk scale.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if cb.d**n > RANK_SIZE_GUARD or cb.m**n > RANK_SIZE_GUARD:
        raise ValueError(
            f"rank computation guarded to d^n and m^n <= {RANK_SIZE_GUARD}; "
            f"got d={cb.d}, m={cb.m}, n={n}"
        )
    rows = [
        bind(backend, [cb.vec(i) for i in tup]).values
        for tup in itertools.product(range(cb.m), repeat=n)
    ]
    matrix = np.vstack(rows)
    sv = np.linalg.svd(matrix, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > RANK_SV_TOL * sv[0]))
