"""Seed derivation.

Every random stream in the package is a PCG64 generator seeded from
``SeedSequence(master_seed, spawn_key=(domain, *keys))``. The domain tag keeps
streams for different purposes apart even when the remaining keys coincide.

Node streams use ``keys = (path_code, candidate_index)`` where ``path_code``
encodes the root-to-node path as a bit string with a leading 1: the root is
``0b1``, its left child ``0b10``, its right child ``0b11``, and so on. Because
each candidate at each node owns its stream, results do not depend on
evaluation order or worker count.
"""

import numpy as np

NODE = 1
MEMBER = 2
RUN = 3
CELL = 4
TRIAL = 5
HOLDOUT = 6
ROUND = 7

ROOT_PATH = 1


def child_path(path, side):
    """Path code of the left (side=0) or right (side=1) child."""
    return (path << 1) | side


def _check_seed(seed):
    seed = int(seed)
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return seed


def stream(seed, domain, *keys):
    ss = np.random.SeedSequence(_check_seed(seed), spawn_key=(domain, *map(int, keys)))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed, domain, *keys):
    """A 63-bit integer seed for a sub-computation."""
    ss = np.random.SeedSequence(_check_seed(seed), spawn_key=(domain, *map(int, keys)))
    hi, lo = ss.generate_state(2, dtype=np.uint32)
    return ((int(hi) << 32) | int(lo)) >> 1


def randbelow(rng, n):
    """Uniform integer in [0, n) for arbitrarily large Python ints."""
    n = int(n)
    if n <= 0:
        raise ValueError("n must be positive")
    if n <= 2**62:
        return int(rng.integers(0, n))
    nbits = n.bit_length()
    nwords = (nbits + 31) // 32
    excess = nwords * 32 - nbits
    while True:
        words = rng.integers(0, 2**32, size=nwords, dtype=np.uint64)
        x = 0
        for w in words:
            x = (x << 32) | int(w)
        x >>= excess
        if x < n:
            return x
