"""Rays, unit rays and phase alignment.

A ray is stored through a canonical unit representative: the first
component whose modulus exceeds ``phase_pivot_tol`` is made real and
positive.  Two vectors span the same ray iff ``|<phi, psi>| = ||phi|| ||psi||``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES, as_rng
from .exceptions import OrthogonalStates
from .hilbert import as_unit, check_same_dim, normalize, random_units


def canonical_phase(phi: np.ndarray, *, pivot_tol: float = DEFAULT_TOLERANCES.phase_pivot_tol) -> np.ndarray:
    mags = np.abs(phi)
    idx = np.flatnonzero(mags > pivot_tol)
    pivot = idx[0] if idx.size else int(np.argmax(mags))
    return phi * (np.conj(phi[pivot]) / mags[pivot])


@dataclass(frozen=True, eq=False)
class Ray:
    """Equivalence class ``[phi]`` held by its canonical unit representative."""

    rep: np.ndarray = field(repr=False)

    def __post_init__(self):
        rep = np.array(self.rep, dtype=np.complex128)
        rep.setflags(write=False)
        object.__setattr__(self, "rep", rep)

    @property
    def dim(self) -> int:
        return self.rep.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Ray):
            return NotImplemented
        return self.dim == other.dim and bool(np.all(np.abs(self.rep - other.rep) <= 1e-10))

    __hash__ = None

    def __repr__(self):
        return f"Ray(dim={self.dim}, rep={np.round(self.rep, 6).tolist()})"


def ray_of(phi, *, tol=DEFAULT_TOLERANCES) -> Ray:
    """Canonical projection ``H* -> P(H)``; invariant under ``phi -> alpha * phi``."""
    unit = normalize(phi, zero_tol=tol.zero_tol)
    return Ray(canonical_phase(unit, pivot_tol=tol.phase_pivot_tol))


def same_ray(phi, psi, *, tol=DEFAULT_TOLERANCES) -> bool:
    phi = normalize(phi, zero_tol=tol.zero_tol)
    psi = normalize(psi, zero_tol=tol.zero_tol)
    check_same_dim(phi, psi)
    return bool(abs(abs(np.vdot(phi, psi)) - 1.0) <= tol.ray_eq_tol)


def phase_factor(phi, phi0, *, zero_tol: float = DEFAULT_TOLERANCES.zero_tol) -> complex:
    """``lambda = <phi, phi0> / |<phi, phi0>|``, the phase rotating ``phi`` towards ``phi0``."""
    ip = np.vdot(phi, phi0)
    if abs(ip) <= zero_tol:
        raise OrthogonalStates("phase factor undefined: <phi, phi0> = 0")
    return complex(ip / abs(ip))


def phase_align(phi, phi0, *, zero_tol: float = DEFAULT_TOLERANCES.zero_tol) -> np.ndarray:
    """Return ``lambda * phi``, the phase multiple of ``phi`` closest to ``phi0``.

    Both inputs must be unit vectors with ``<phi, phi0> != 0``.
    """
    phi, phi0 = as_unit(phi), as_unit(phi0)
    check_same_dim(phi, phi0)
    return phase_factor(phi, phi0, zero_tol=zero_tol) * phi


def phase_align_bound(phi, phi0) -> tuple[float, float]:
    """Distance ``||lambda phi - phi0||`` and the two-term triangle bound for it.

    The bound is ``||phi - <phi0,phi> phi0|| + || |<phi0,phi>| phi0 - phi0 ||``.
    """
    phi, phi0 = as_unit(phi), as_unit(phi0)
    aligned = phase_align(phi, phi0)
    ip = np.vdot(phi0, phi)
    bound = np.linalg.norm(phi - ip * phi0) + np.linalg.norm(abs(ip) * phi0 - phi0)
    return float(np.linalg.norm(aligned - phi0)), float(bound)


def openness_echo(center, radius: float, samples: int, seed=None, grid: int = 10_000) -> dict:
    """Sampled check that the saturation of an open ball is a union of rotated balls.

    For each sample ``u`` in the ball ``U = {||u - center|| < radius}`` on the
    unit sphere and a random phase multiple ``chi`` of ``u``, search a
    ``grid``-point phase grid for ``lam`` putting ``lam chi`` back into ``U``
    up to the grid slack ``2 pi / grid``.
    """
    center = as_unit(center)
    rng = as_rng(seed)
    dim = center.shape[0]
    thetas = np.exp(1j * 2 * np.pi * np.arange(grid) / grid)
    slack = 2 * np.pi / grid
    failures = []
    checked = 0
    while checked < samples:
        # shrink a random direction onto the ball, then renormalize
        d = random_units(dim, 1, rng)[0]
        u = normalize(center + rng.uniform(0, radius) * d)
        if np.linalg.norm(u - center) >= radius:
            continue
        chi = np.exp(1j * rng.uniform(0, 2 * np.pi)) * u
        dists = np.linalg.norm(thetas[:, None] * chi[None, :] - center[None, :], axis=1)
        if not dists.min() < radius + slack:
            failures.append(checked)
        checked += 1
    return {"checked": checked, "agreed": checked - len(failures), "violations": failures}

