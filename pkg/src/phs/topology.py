"""Membership predicates for the weak (transition-probability) topology and
the operator-norm metric topology, plus sampled checks that the two agree.

All sets are open, so every comparison is strict.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import as_rng
from .exceptions import EqualStates
from .hilbert import random_units
from .projector import PureState, overlaps, rho_n, rho_n_matrix, state_matrix, state_vec, transition_probability


@dataclass(frozen=True)
class MetricBall:
    center: PureState
    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")


@dataclass(frozen=True)
class WeakNeighborhood:
    """``{P~ : |h_Qi(P~) - h_Qi(center)| < epsilon for every probe Qi}``."""

    center: PureState
    probes: tuple
    epsilon: float

    def __post_init__(self):
        object.__setattr__(self, "probes", tuple(self.probes))
        if not self.probes:
            raise ValueError("a weak neighborhood needs at least one probe")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")

    def mask(self, states) -> np.ndarray:
        """Vectorized membership for the rows of a ``(n, dim)`` state array."""
        X = state_matrix(states)
        Q = state_matrix(self.probes)
        ref = overlaps(Q, state_vec(self.center)[None, :])[:, 0]
        h = overlaps(Q, X)
        return np.all(np.abs(h - ref[:, None]) < self.epsilon, axis=0)


@dataclass(frozen=True)
class BaseSetIndex:
    """Index ``(Q_k, q_l, m)`` of the base set ``{P : |tr(P Q_k) - q_l| < 1/m}``."""

    Q_k: PureState
    q_l: Fraction
    m: int

    def __post_init__(self):
        if not 0 <= self.q_l <= 1:
            raise ValueError("q_l must lie in [0, 1]")
        if self.m < 1:
            raise ValueError("m must be >= 1")


def in_ball(P, B: MetricBall) -> bool:
    return rho_n(P, B.center) < B.epsilon


def in_weak_nbhd(P, U: WeakNeighborhood) -> bool:
    return bool(U.mask(state_vec(P)[None, :])[0])


def in_base_set(P, idx: BaseSetIndex) -> bool:
    return abs(transition_probability(P, idx.Q_k) - float(idx.q_l)) < 1.0 / idx.m


def separate(P1, P2) -> tuple[WeakNeighborhood, WeakNeighborhood]:
    """Disjoint weak neighborhoods of two distinct pure states.

    With ``eps = 1 - h_P1(P2)`` the single probe ``P1`` splits the space at the
    threshold ``1 - eps/2``: ``U1`` needs ``h_P1 > 1 - eps/2`` and ``U2`` needs
    ``h_P1 < 1 - eps/2``.
    """
    P1 = P1 if isinstance(P1, PureState) else PureState(P1)
    P2 = P2 if isinstance(P2, PureState) else PureState(P2)
    if P1 == P2:
        raise EqualStates("cannot separate a state from itself")
    eps = 1.0 - transition_probability(P2, P1)
    U1 = WeakNeighborhood(P1, (P1,), eps / 2)
    U2 = WeakNeighborhood(P2, (P1,), eps / 2)
    return U1, U2


def _samples_near(P, count: int, rng, scale: float) -> np.ndarray:
    # half uniform over the sphere, half clustered around P so both sides of the boundary are hit
    p = state_vec(P)
    dim = p.shape[0]
    n_far = count // 2
    far = random_units(dim, n_far, rng)
    noise = random_units(dim, count - n_far, rng) * rng.uniform(0, 2 * scale, size=(count - n_far, 1))
    near = p[None, :] + noise
    near /= np.linalg.norm(near, axis=1, keepdims=True)
    return np.vstack([far, near])


def _report(agree: np.ndarray, **extra) -> dict:
    viol = np.flatnonzero(~agree).tolist()
    return {"checked": int(agree.size), "agreed": int(agree.sum()), "violations": viol, **extra}


def verify_ball_identity(P, eps: float, samples: int, seed=None) -> dict:
    """Check ``U(P; P; eps^2) == K_eps(P)`` on random states.

    The first sample is ``P`` itself; the rest are split between uniform
    states and states clustered around ``P`` at scale ``eps``.
    """
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    P = P if isinstance(P, PureState) else PureState(P)
    rng = as_rng(seed)
    X = np.vstack([P.vec[None, :], _samples_near(P, samples - 1, rng, eps)])
    weak = WeakNeighborhood(P, (P,), eps**2).mask(X)
    ball = rho_n_matrix(X, P.vec)[:, 0] < eps
    return _report(weak == ball, in_ball=int(ball.sum()))


def sample_in_ball(P, eps: float, count: int, seed=None) -> np.ndarray:
    """Rejection-sample ``count`` states from the open ball ``K_eps(P)``."""
    P = P if isinstance(P, PureState) else PureState(P)
    rng = as_rng(seed)
    out = []
    have = 0
    while have < count:
        X = _samples_near(P, 2 * count, rng, min(eps, 1.0))
        X = X[rho_n_matrix(X, P.vec)[:, 0] < eps]
        out.append(X)
        have += X.shape[0]
    return np.vstack(out)[:count]


def inclusion_check(P, probes: Sequence, eps: float, samples: int, seed=None) -> dict:
    """Check ``K_eps(P) ⊆ U(P; Q_1..Q_n; eps)`` on states drawn from the ball."""
    if not eps > 0:
        raise ValueError("eps must be > 0")
    P = P if isinstance(P, PureState) else PureState(P)
    X = sample_in_ball(P, eps, samples, seed)
    weak = WeakNeighborhood(P, tuple(probes), eps).mask(X)
    return _report(weak)


def q_grid(l_max: int) -> list[Fraction]:
    return [Fraction(l, l_max) for l in range(l_max + 1)]


def sample_base(dim: int, k_max: int, l_max: int, m_max: int, seed=None) -> list[BaseSetIndex]:
    """Finite truncation of the countable base: random ``Q_k``, ``q_l = l / l_max``, ``m <= m_max``.

    Yields ``k_max * (l_max + 1) * m_max`` indices, deterministic per seed.
    """
    if min(dim, k_max, l_max, m_max) < 1:
        raise ValueError("all bounds must be >= 1")
    Q = [PureState(v) for v in random_units(dim, k_max, seed)]
    qs = q_grid(l_max)
    return [BaseSetIndex(Qk, q, m) for Qk in Q for q in qs for m in range(1, m_max + 1)]


def base_covering_failures(Q, interval: tuple[float, float], points, base_states, l_max: int, m_max: int) -> int:
    """Count points of ``h_Q^{-1}(interval)`` not covered by a certified base set inside it.

    A base set ``U_klm`` is certified to lie in ``h_Q^{-1}((a, b))`` when
    ``[q_l - 1/m - d_k, q_l + 1/m + d_k] ⊆ (a, b)`` with
    ``d_k = ||Q_k - Q||``, since ``|h_Q - h_Qk| <= ||Q - Q_k||`` pointwise.
    """
    a, b = interval
    q = state_vec(Q)
    X = state_matrix(points)
    Qk = state_matrix(base_states)
    hQ = overlaps(q[None, :], X)[0]
    inside = (hQ > a) & (hQ < b)
    if not inside.any():
        return 0
    X = X[inside]
    d = rho_n_matrix(Qk, q)[:, 0]  # (K,)
    qs = np.arange(l_max + 1) / l_max  # (L,)
    slack = np.minimum(qs[None, :] - a, b - qs[None, :]) - d[:, None]  # (K, L)
    with np.errstate(divide="ignore"):
        m_lo = np.where(slack > 0, np.maximum(1, np.ceil(1.0 / slack)), np.inf)
    m_lo = np.where(m_lo <= m_max, m_lo, np.inf)
    H = overlaps(Qk, X)  # (K, N)
    gap = np.abs(H[:, None, :] - qs[None, :, None])  # (K, L, N)
    with np.errstate(invalid="ignore"):
        covered = (m_lo[:, :, None] * gap < 1.0).any(axis=(0, 1))
    return int((~covered).sum())
