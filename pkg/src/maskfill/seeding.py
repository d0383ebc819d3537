"""Deterministic derivation of per-item random streams.

Every piece of randomness in the pipeline flows from a global seed plus a
stable key (sample id, augmentation index, ...) so results do not depend on
scheduling or iteration order.
"""

import hashlib
import random


def derive_seed(*parts) -> int:
    """Collapse a key such as (global_seed, sample_id, j) into a 64-bit seed."""
    material = "\x1f".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(material).digest()[:8], "big")


def derive_rng(*parts) -> random.Random:
    """A random.Random seeded from derive_seed(*parts)."""
    return random.Random(derive_seed(*parts))
