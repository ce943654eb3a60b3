"""Finite-sequence convergence diagnostics for pure states.

A finite sequence "converges" in a topology when its residuals against the
last element (the limit candidate) stay below ``tol`` over the tail and do
not trend upward; it is "Cauchy" when consecutive residuals over the tail
stay below ``tol``.  Four topologies are probed:

``weak``   ``max_Q |h_Q(P_n) - h_Q(L)|`` over probe states
``strong`` ``max_psi ||(P_n - L) psi||`` over probe vectors
``norm``   ``rho_n(P_n, L)``
``trace``  ``rho_tr(P_n, L)``, compared against ``2 * tol``

Weak Cauchy-ness is only probe-wise ("probe-Cauchy"): finitely many probes
can never certify Cauchy-ness in the full weak uniformity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .config import as_rng
from .exceptions import EmptyProbes, LengthExceedsDim, NotCauchy, TailTooLong
from .hilbert import normalize
from .projector import PureState, dense_spectrum, materialize, overlaps, rho_n_matrix, state_matrix, state_vec

TOPOLOGIES = ("weak", "strong", "norm", "trace")

# stronger topology -> weaker topology; convergence in the former forces it in the latter
_IMPLIES = (("norm", "strong"), ("strong", "weak"))


@dataclass(frozen=True)
class StateSequence:
    states: tuple
    label: str = ""

    def __post_init__(self):
        states = tuple(s if isinstance(s, PureState) else PureState(s) for s in self.states)
        if len(states) < 2:
            raise ValueError("a state sequence needs at least two states")
        if len({s.dim for s in states}) != 1:
            raise ValueError("all states in a sequence must share one dimension")
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self):
        return len(self.states)

    def matrix(self) -> np.ndarray:
        return state_matrix(self.states)


@dataclass
class TopologyVerdict:
    converges: bool
    cauchy: bool
    limit_candidate: Optional[PureState]
    residual_tail: list
    cauchy_tail: list

    def to_dict(self) -> dict:
        return {
            "converges": self.converges,
            "cauchy": self.cauchy,
            "limit_candidate": None if self.limit_candidate is None else self.limit_candidate.vec,
            "residual_tail": self.residual_tail,
            "cauchy_tail": self.cauchy_tail,
        }


@dataclass
class ConvergenceReport:
    verdicts: dict
    probes: dict
    tolerances: dict
    adjustments: list = field(default_factory=list)

    def __getitem__(self, topology: str) -> TopologyVerdict:
        return self.verdicts[topology]

    def to_dict(self) -> dict:
        return {
            "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
            "probes": self.probes,
            "tolerances": self.tolerances,
            "adjustments": self.adjustments,
        }


def _trend_ok(res: np.ndarray, tol: float) -> bool:
    if res.size < 2 or np.all(res == res[0]):
        return True
    slope = np.polyfit(np.arange(res.size, dtype=float), res, 1)[0]
    return bool(slope <= tol / res.size)


def _residuals(X: np.ndarray, L: np.ndarray, probes: np.ndarray, probe_vectors: np.ndarray) -> dict:
    """Residuals of every row of ``X`` against the state ``L`` in each topology."""
    h_X = overlaps(probes, X)
    h_L = overlaps(probes, L[None, :])
    weak = np.max(np.abs(h_X - h_L), axis=0)
    # (P_n - L) psi = x_n <x_n, psi> - l <l, psi>
    a = X.conj() @ probe_vectors.T  # (n, k)
    b = L.conj() @ probe_vectors.T  # (k,)
    diff = X[:, None, :] * a[:, :, None] - L[None, None, :] * b[None, :, None]
    strong = np.max(np.linalg.norm(diff, axis=2), axis=1)
    norm = rho_n_matrix(X, L)[:, 0]
    return {"weak": weak, "strong": strong, "norm": norm, "trace": 2.0 * norm}


def _pairwise_residuals(X: np.ndarray, probes: np.ndarray, probe_vectors: np.ndarray) -> dict:
    """Residuals between consecutive rows of ``X``."""
    out = {k: [] for k in TOPOLOGIES}
    for i in range(X.shape[0] - 1):
        r = _residuals(X[i : i + 1], X[i + 1], probes, probe_vectors)
        for k in TOPOLOGIES:
            out[k].append(float(r[k][0]))
    return {k: np.array(v) for k, v in out.items()}


def analyze(seq: StateSequence, probes: Sequence, probe_vectors: Sequence, tol: float, tail: int,
            include_limit_probe: bool = True) -> ConvergenceReport:
    """Classify ``seq`` in the weak, strong, norm and trace topologies.

    ``include_limit_probe`` adds the limit candidate to the weak probes for the
    convergence residuals (never for the Cauchy residuals).  With it, weak
    convergence to ``L`` demands ``h_L(P_n) -> 1``, so a sequence whose weak
    limit leaves the state space is not reported as weakly convergent.

    The verdicts are made consistent with ``norm => strong => weak`` and
    ``converges => cauchy``; every lift is recorded in ``adjustments``.
    """
    if len(probes) == 0 or len(probe_vectors) == 0:
        raise EmptyProbes("analyze needs at least one probe state and one probe vector")
    if tail >= len(seq):
        raise TailTooLong(f"tail {tail} must be shorter than the sequence ({len(seq)})")
    if tail < 1:
        raise ValueError("tail must be >= 1")
    X = seq.matrix()
    L = X[-1]
    Q = state_matrix(probes)
    V = np.array([normalize(v) for v in probe_vectors])
    Q_limit = np.vstack([Q, L[None, :]]) if include_limit_probe else Q

    window = X[-tail - 1 : -1]
    conv = _residuals(window, L, Q_limit, V)
    cauchy = _pairwise_residuals(X[-tail - 1 :], Q, V)

    verdicts: dict[str, TopologyVerdict] = {}
    adjustments: list[str] = []
    for top in TOPOLOGIES:
        t = 2.0 * tol if top == "trace" else tol
        r, c = conv[top], cauchy[top]
        verdicts[top] = TopologyVerdict(
            converges=bool(np.all(r < t) and _trend_ok(r, t)),
            cauchy=bool(np.all(c < t)),
            limit_candidate=None,
            residual_tail=[float(x) for x in r],
            cauchy_tail=[float(x) for x in c],
        )
    # rho_tr = 2 rho_n, so trace and norm verdicts coincide by construction
    for strong, weak in _IMPLIES:
        if verdicts[strong].converges and not verdicts[weak].converges:
            verdicts[weak].converges = True
            adjustments.append(f"{weak}.converges lifted by {strong}.converges")
    for top, v in verdicts.items():
        if v.converges and not v.cauchy:
            v.cauchy = True
            adjustments.append(f"{top}.cauchy lifted by {top}.converges")
    if verdicts["norm"].cauchy:
        limit = seq.states[-1]
        for v in verdicts.values():
            if v.converges:
                v.limit_candidate = limit

    return ConvergenceReport(
        verdicts=verdicts,
        probes={
            "states": int(Q.shape[0]),
            "vectors": int(V.shape[0]),
            "limit_probe": include_limit_probe,
            "weak_cauchy_kind": "probe-Cauchy",
        },
        tolerances={"tol": tol, "trace_tol": 2.0 * tol, "tail": tail},
        adjustments=adjustments,
    )


def l2_probes(dim: int, count: int, seed=None, decay: float = 1.0) -> np.ndarray:
    """Random unit probes whose amplitudes decay like ``j^-decay`` in the basis index.

    A fixed vector of an infinite-dimensional space has square-summable
    coordinates; these probes mimic that on a truncation, unlike uniform
    probes which spread evenly over all coordinates.
    """
    rng = as_rng(seed)
    scale = np.arange(1, dim + 1, dtype=float) ** -decay
    z = (rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))) * scale
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def orthonormal_counterexample(dim: int, length: int, seed=None) -> StateSequence:
    """Projectors onto ``length`` orthonormal vectors ``phi_n = e^{i theta_n} e_n``.

    Consecutive states are at operator-norm distance exactly 1, while every
    fixed probe sees ``sum_n h_Q(P_n) <= 1``.
    """
    if length > dim:
        raise LengthExceedsDim(f"an orthonormal sequence of length {length} does not fit in dimension {dim}")
    if length < 2:
        raise ValueError("length must be >= 2")
    rng = as_rng(seed)
    phases = np.exp(2j * np.pi * rng.random(length))
    states = []
    for n in range(length):
        v = np.zeros(dim, dtype=np.complex128)
        v[n] = phases[n]
        states.append(PureState(v))
    return StateSequence(tuple(states), label=f"orthonormal-counterexample(dim={dim}, length={length})")


def bessel_sums(seq: StateSequence, probes) -> np.ndarray:
    """``sum_n h_Q(P_n)`` for every probe ``Q``."""
    return overlaps(state_matrix(probes), seq.matrix()).sum(axis=1)


def completeness_check(seq: StateSequence, tol: float, tail: int = 16) -> dict:
    """Test whether the trace-norm limit of a Cauchy tail is again a pure state.

    The candidate ``A`` is the average of the materialized tail projectors.
    Reports ``||A^2 - A||`` (operator norm) and ``|tr A - 1|``; ``is_pure``
    holds when both are below ``tol``.

    Raises
    ------
    NotCauchy
        If consecutive trace-norm distances over the tail reach ``tol``.
    """
    tail = min(tail, len(seq) - 1)
    X = seq.matrix()[-tail - 1 :]
    steps = 2.0 * np.array([rho_n_matrix(X[i], X[i + 1])[0, 0] for i in range(X.shape[0] - 1)])
    if np.any(steps >= tol):
        raise NotCauchy(f"sequence is not rho_tr-Cauchy within {tol} (max step {steps.max():.3g})")
    A = np.mean([materialize(x) for x in X], axis=0)
    A = 0.5 * (A + A.conj().T)
    idem = float(np.max(np.abs(dense_spectrum(A @ A - A))))
    trace = float(abs(np.trace(A).real - 1.0))
    return {
        "limit": A,
        "idempotency_residual": idem,
        "trace_residual": trace,
        "is_pure": idem < tol and trace < tol,
    }


def distance_to_limit(limit: np.ndarray, P) -> float:
    """Operator-norm distance between a dense limit matrix and a pure state."""
    M = limit - materialize(state_vec(P))
    return float(np.max(np.abs(dense_spectrum(0.5 * (M + M.conj().T)))))
