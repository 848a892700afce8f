"""Deterministic per-task random streams.

Every stochastic routine in the package draws from a `random.Random`
derived from (master seed, *indices) by hashing, never from the global
RNG.  Because each trial owns a stream keyed by its index, results do
not depend on how trials are split across workers.
"""

from __future__ import annotations

import hashlib
import random
from typing import Union

StreamIndex = Union[int, str]


def derive_stream(master_seed: int, *indices: StreamIndex) -> random.Random:
    """Return an independent ``random.Random`` keyed by (seed, *indices).

    Indices may be ints or short ASCII tags; tags keep streams of
    different subsystems disjoint even at equal numeric indices.
    """
    parts = [str(int(master_seed))]
    for x in indices:
        parts.append(str(int(x)) if isinstance(x, int) else str(x))
    digest = hashlib.sha256(":".join(parts).encode("ascii")).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))
