"""Named numerical tolerances and seed derivation."""
from __future__ import annotations

import zlib
from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    norm_tol: float = 1e-12
    ortho_tol: float = 1e-10
    zero_tol: float = 1e-300
    phase_pivot_tol: float = 1e-10
    ray_eq_tol: float = 1e-10

    def override(self, **kwargs) -> "Tolerances":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


DEFAULT_TOLERANCES = Tolerances()


def derive_seed(root: int, label: str) -> int:
    """Split ``root`` into an independent 64-bit seed identified by ``label``.

    The label is hashed with CRC32 so the mapping is stable across Python
    processes (``hash()`` is salted).
    """
    ss = np.random.SeedSequence([int(root) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(label.encode())])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
