"""Deterministic randomness and hashing helpers.

Every random draw in the package flows through these functions so that
golden files stay identical across platforms and processes:

* generators are numpy ``Generator`` objects over the PCG64 bit generator,
  seeded through ``SeedSequence`` from explicit integer components;
* string hashing uses BLAKE2b (8-byte digest), which is fully specified
  and has no per-process randomization.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def make_rng(*components: int) -> np.random.Generator:
    """PCG64 generator seeded from one or more integers.

    Negative components are mapped to their unsigned 64-bit representation
    so that any Python int is accepted.
    """
    entropy = [int(c) & _MASK64 for c in components]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def stable_hash64(*parts: int | str) -> int:
    """Platform-stable 64-bit hash of the given parts.

    Parts are joined with an ASCII unit separator and digested with
    BLAKE2b; the result is a non-negative int below 2**64.
    """
    data = "\x1f".join(str(p) for p in parts).encode("utf-8")
    digest = hashlib.blake2b(data, digest_size=8).digest()
    return int.from_bytes(digest, "big")
