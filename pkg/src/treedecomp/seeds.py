"""Splittable seed derivation.

Every random draw in the pipeline uses its own ``random.Random`` keyed on
(master seed, purpose, stage, vertex, tree vertex, ...), so results do not
depend on the order in which independent pieces are processed.
"""

from __future__ import annotations

import hashlib
import random

MASK64 = (1 << 64) - 1


def derive_seed(master: int, *key: int | str) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(str(master & MASK64).encode())
    for part in key:
        h.update(b"\x1f")
        h.update(str(part).encode())
    return int.from_bytes(h.digest(), "big")


def rng_for(master: int, *key: int | str) -> random.Random:
    return random.Random(derive_seed(master, *key))
