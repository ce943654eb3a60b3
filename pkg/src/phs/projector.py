"""Pure states as rank-one projectors.

A :class:`PureState` holds only its unit vector; every metric is an O(dim)
closed form in the overlap ``|<phi, psi>|``.  Dense matrices appear only on
the oracle side (:func:`materialize`, :func:`dense_spectrum`), which is kept
independent of the closed forms so the two can check each other.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .config import DEFAULT_TOLERANCES
from .exceptions import ConvergenceFailure, DimensionMismatch
from .hilbert import as_unit, check_same_dim, normalize

MAX_SWEEPS = 500


class PureState:
    """The projector ``P_phi = |phi><phi|``, stored implicitly by ``phi``.

    Equality is ray equality: ``PureState(phi) == PureState(1j * phi)``.
    """

    __slots__ = ("vec",)

    def __init__(self, vec, *, normalize_input: bool = False):
        v = normalize(vec) if normalize_input else as_unit(vec)
        v = np.array(v, dtype=np.complex128)
        v.setflags(write=False)
        self.vec = v

    @classmethod
    def from_vector(cls, phi) -> "PureState":
        return cls(phi, normalize_input=True)

    @property
    def dim(self) -> int:
        return self.vec.shape[0]

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return self.dim == other.dim and abs(abs(np.vdot(self.vec, other.vec)) - 1.0) <= DEFAULT_TOLERANCES.ray_eq_tol

    __hash__ = None

    def __repr__(self):
        return f"PureState(dim={self.dim})"


def state_vec(P) -> np.ndarray:
    """Unit vector behind ``P``; accepts a :class:`PureState` or a unit array."""
    if isinstance(P, PureState):
        return P.vec
    return as_unit(P)


def state_matrix(states) -> np.ndarray:
    """Stack states (PureStates or unit vectors) into a ``(n, dim)`` array."""
    if isinstance(states, np.ndarray) and states.ndim == 2:
        return states.astype(np.complex128, copy=False)
    return np.array([state_vec(s) for s in states], dtype=np.complex128)


def overlaps(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """All transition probabilities ``|<a_i, b_j>|^2`` between rows of ``A`` and ``B``."""
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    check_same_dim(A, B)
    return np.abs(A.conj() @ B.T) ** 2


def transition_probability(P, Q) -> float:
    """``h_Q(P) = tr(PQ) = |<phi_Q, phi_P>|^2``, clipped to ``[0, 1]``."""
    p, q = state_vec(P), state_vec(Q)
    check_same_dim(p, q)
    return float(min(1.0, abs(np.vdot(q, p)) ** 2))


def rho_n(P, Q) -> float:
    """Operator-norm distance ``||P - Q|| = sqrt(1 - tr(PQ))``.

    Evaluated as ``||phi - <psi, phi> psi||``, which equals ``sqrt(1 - tr(PQ))``
    but does not lose precision to cancellation when ``P`` is close to ``Q``.
    """
    p, q = state_vec(P), state_vec(Q)
    check_same_dim(p, q)
    return float(min(1.0, np.linalg.norm(p - np.vdot(q, p) * q)))


def rho_n_matrix(A, B) -> np.ndarray:
    """``rho_n`` between every row of ``A`` and every row of ``B``, shape ``(n, m)``."""
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    check_same_dim(A, B)
    G = B.conj() @ A.T  # G[j, i] = <b_j, a_i>
    R = A[:, None, :] - G.T[:, :, None] * B[None, :, :]
    return np.minimum(1.0, np.linalg.norm(R, axis=2))


def rho_tr(P, Q) -> float:
    """Trace-norm distance ``||P - Q||_tr = 2 ||P - Q||``."""
    return 2.0 * rho_n(P, Q)


def diff_eigenvalues(P, Q) -> tuple[float, float]:
    """The two nonzero eigenvalues ``+-sqrt(1 - |<phi, psi>|^2)`` of ``P - Q``.

    Every other eigenvalue of ``P - Q`` is zero.  For ``P == Q`` this returns
    ``(0.0, 0.0)``.
    """
    lam = rho_n(P, Q)
    return lam, -lam


def materialize(P) -> np.ndarray:
    """Dense Hermitian matrix ``phi phi^dagger`` (entries ``phi_i conj(phi_j)``)."""
    p = state_vec(P)
    return np.outer(p, p.conj())


def is_hermitian(M, tol: float = 1e-12) -> bool:
    M = np.asarray(M)
    return M.ndim == 2 and M.shape[0] == M.shape[1] and bool(np.all(np.abs(M - M.conj().T) <= tol))


@njit(cache=True)
def _jacobi_sweeps(A, tol, max_sweeps):
    # cyclic complex Jacobi; A is overwritten, returns (diag, sweeps used, final off-norm)
    n = A.shape[0]
    off = 0.0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += A[i, j].real ** 2 + A[i, j].imag ** 2
        off = np.sqrt(off)
        if off < tol:
            d = np.empty(n)
            for i in range(n):
                d[i] = A[i, i].real
            return d, sweep, off
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                # rotate column/row q by a phase so that A[p, q] becomes real positive
                ph = apq / mag
                for k in range(n):
                    A[k, q] = A[k, q] * np.conj(ph)
                for k in range(n):
                    A[q, k] = A[q, k] * ph
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
    d = np.empty(n)
    for i in range(n):
        d[i] = A[i, i].real
    return d, max_sweeps, off


def dense_spectrum(M, *, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, descending, by cyclic Jacobi rotation.

    Iterates until the off-diagonal Frobenius norm drops below
    ``1e-12 * dim * max(1, ||M||_F)``.

    Raises
    ------
    ConvergenceFailure
        If the residual is still above tolerance after ``max_sweeps`` sweeps.
    """
    A = np.array(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if not is_hermitian(A):
        raise ValueError("matrix is not Hermitian within 1e-12")
    n = A.shape[0]
    tol = 1e-12 * n * max(1.0, float(np.linalg.norm(A)))
    d, sweeps, off = _jacobi_sweeps(A, tol, max_sweeps)
    if off >= tol:
        raise ConvergenceFailure(f"Jacobi did not converge in {sweeps} sweeps (off-diagonal {off:.3e})")
    return np.sort(d)[::-1]


def operator_norm(M) -> float:
    return float(np.max(np.abs(dense_spectrum(M))))


def trace_norm(M) -> float:
    return float(np.sum(np.abs(dense_spectrum(M))))


def oracle_distances(P, Q) -> dict:
    """Operator and trace norm of ``P - Q`` from the dense eigensolver."""
    spec = dense_spectrum(materialize(P) - materialize(Q))
    return {"rho_n": float(np.max(np.abs(spec))), "rho_tr": float(np.sum(np.abs(spec))), "spectrum": spec}


def norm_bound_check(phi, psi) -> tuple[float, float, bool]:
    """Compare ``||P_phi - P_psi||`` with ``||phi - psi||``; the former never exceeds the latter."""
    phi, psi = as_unit(phi), as_unit(psi)
    check_same_dim(phi, psi)
    lhs = rho_n(phi, psi)
    rhs = float(np.linalg.norm(phi - psi))
    return lhs, rhs, lhs <= rhs + 1e-12


def trace_of_product(P, Q) -> float:
    """``tr(PQ)`` through materialized matrices; oracle for :func:`transition_probability`."""
    return float(np.real(np.trace(materialize(P) @ materialize(Q))))

