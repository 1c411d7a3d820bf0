"""Seedable random streams.

Every randomized routine takes a :class:`random.Random` explicitly.  Child
streams for batch runs are derived by hashing ``(seed, index)``, so run ``i``
sees the same numbers regardless of how many workers share the batch.
"""

from __future__ import annotations

import hashlib
import random
import secrets
from typing import Optional, Union

SEED_BITS = 64
SeedLike = Union[int, random.Random, None]


def fresh_seed() -> int:
    return secrets.randbits(SEED_BITS)


def derive_seed(seed: int, index: int) -> int:
    h = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


def make_rng(seed: SeedLike = None) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(fresh_seed() if seed is None else seed)


def child_rng(seed: int, index: int) -> random.Random:
    return random.Random(derive_seed(seed, index))


def check_seed(seed: Optional[int]) -> int:
    if seed is None:
        return fresh_seed()
    if not 0 <= seed < 1 << SEED_BITS:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed
