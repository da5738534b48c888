"""Deterministic seed splitting.

Every stochastic routine takes a plain integer seed.  Runs that need many
streams derive them from one master seed with :func:`subseed`, which hashes
``(master, purpose, *indices)`` through ``numpy.random.SeedSequence``.  The
derivation is order-free: adding more samples or reordering scenario steps
never changes the seeds already handed out.
"""

from __future__ import annotations

import zlib

import numpy as np


def _purpose_code(purpose: str) -> int:
    return zlib.crc32(purpose.encode("utf-8"))


def subseed(master: int, purpose: str, *indices: int) -> int:
    """Derive a 64-bit child seed for (master, purpose, indices)."""
    entropy = [int(master) & 0xFFFFFFFFFFFFFFFF, _purpose_code(purpose)]
    entropy.extend(int(i) for i in indices)
    seq = np.random.SeedSequence(entropy)
    return int(seq.generate_state(1, np.uint64)[0])


def rng_for(master: int, purpose: str, *indices: int) -> np.random.Generator:
    """Generator seeded by :func:`subseed` of the same arguments."""
    return np.random.default_rng(subseed(master, purpose, *indices))
