"""Seeded random streams.

All randomness in this package flows through counter-based Philox
generators keyed by ``(seed, tag)``: the 64-bit user seed plus a BLAKE2b
hash of a short purpose tag.  Distinct tags give statistically
independent streams, so codebook draws never overlap with trial draws,
and every stream is reproducible bit-for-bit from its ``(seed, tag)``
pair on any platform.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["stream", "derive_seed", "MAX_SEED"]

MAX_SEED = (1 << 64) - 1


def _tag64(tag: str) -> int:
    digest = hashlib.blake2b(tag.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return int(seed)


def stream(seed: int, tag: str) -> np.random.Generator:
    """Return the Philox stream identified by ``(seed, tag)``."""
    key = np.array([check_seed(seed), _tag64(tag)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def derive_seed(seed: int, *parts) -> int:
    """Derive a child 64-bit seed from a parent seed and a label path.

    Used to hand every Monte Carlo trial its own stream: the parts
    identify the consumer (for example ``("trial", "hadamard", d, n, k,
    m, index)``), so trials are independent and order-insensitive.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(check_seed(seed)).encode("ascii"))
    for part in parts:
        h.update(b"/")
        h.update(str(part).encode("utf-8"))
    return int.from_bytes(h.digest(), "little")
