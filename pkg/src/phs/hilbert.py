"""Finite-dimensional complex Hilbert space primitives.

Vectors are plain 1-D ``complex128`` numpy arrays.  The inner product is
conjugate-linear in its first argument::

    inner(phi, psi) == sum(conj(phi) * psi)
"""
from __future__ import annotations

import numpy as np

from .config import DEFAULT_TOLERANCES, as_rng
from .exceptions import CountExceedsDim, DimensionMismatch, ZeroVector


def as_vector(phi) -> np.ndarray:
    """Validate ``phi`` as a state vector and return it as a complex array."""
    arr = np.asarray(phi, dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"state vector must be 1-D with dim >= 1, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("state vector has non-finite components")
    return arr


def check_same_dim(phi: np.ndarray, psi: np.ndarray) -> None:
    if phi.shape[-1] != psi.shape[-1]:
        raise DimensionMismatch(f"dimension mismatch: {phi.shape[-1]} != {psi.shape[-1]}")


def inner(phi, psi) -> complex:
    phi, psi = as_vector(phi), as_vector(psi)
    check_same_dim(phi, psi)
    return complex(np.vdot(phi, psi))


def norm(phi) -> float:
    phi = as_vector(phi)
    scale = np.max(np.abs(phi))
    if scale == 0.0:
        return 0.0
    # rescale first so tiny or huge components do not under/overflow when squared
    return float(scale * np.sqrt(np.sum((np.abs(phi) / scale) ** 2)))


def normalize(phi, *, zero_tol: float = DEFAULT_TOLERANCES.zero_tol) -> np.ndarray:
    """Return ``phi / ||phi||``.

    Raises
    ------
    ZeroVector
        If ``||phi|| <= zero_tol``.
    """
    phi = as_vector(phi)
    scale = np.max(np.abs(phi))
    if scale <= zero_tol:
        raise ZeroVector("cannot normalize a zero vector")
    # real division: complex division by a subnormal scale overflows internally
    scaled = (phi.real / scale) + 1j * (phi.imag / scale)
    n = np.sqrt(np.sum(np.abs(scaled) ** 2))
    if n * scale <= zero_tol:
        raise ZeroVector("cannot normalize a zero vector")
    return scaled / n


def is_unit(phi, *, norm_tol: float = DEFAULT_TOLERANCES.norm_tol) -> bool:
    return abs(norm(phi) - 1.0) <= norm_tol


def as_unit(phi, *, norm_tol: float = DEFAULT_TOLERANCES.norm_tol) -> np.ndarray:
    """Validate that ``phi`` is a unit vector (no renormalization)."""
    phi = as_vector(phi)
    if not is_unit(phi, norm_tol=norm_tol):
        raise ValueError(f"expected a unit vector, got norm {norm(phi)!r}")
    return phi


def random_units(dim: int, count: int, seed=None) -> np.ndarray:
    """Draw ``count`` unitarily invariant random unit vectors, shape ``(count, dim)``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = as_rng(seed)
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_unit(dim: int, seed=None) -> np.ndarray:
    """Random unit vector with complex Gaussian components, deterministic in ``seed``."""
    return random_units(dim, 1, seed)[0]


def orthonormal_system(dim: int, count: int, seed=None) -> list[np.ndarray]:
    """Gram-Schmidt orthonormalize ``count`` random vectors in ``C^dim``."""
    if count > dim:
        raise CountExceedsDim(f"cannot fit {count} orthonormal vectors in dimension {dim}")
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = as_rng(seed)
    basis: list[np.ndarray] = []
    while len(basis) < count:
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        # two passes of modified Gram-Schmidt keep the Gram matrix at ~1e-15
        for _ in range(2):
            for e in basis:
                v = v - np.vdot(e, v) * e
        n = np.linalg.norm(v)
        if n < 1e-8:
            continue
        basis.append(v / n)
    return basis


def gram_matrix(vectors) -> np.ndarray:
    m = np.asarray(vectors, dtype=np.complex128)
    return m.conj() @ m.T
