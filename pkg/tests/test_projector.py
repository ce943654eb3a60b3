import numpy as np
import pytest

from phs.exceptions import ConvergenceFailure, DimensionMismatch
from phs.hilbert import random_units
from phs.projector import (
    PureState,
    dense_spectrum,
    diff_eigenvalues,
    materialize,
    norm_bound_check,
    oracle_distances,
    rho_n,
    rho_n_matrix,
    rho_tr,
    trace_of_product,
    transition_probability,
)

from .conftest import SQ2


def test_pure_state_equality_is_ray_equality():
    assert PureState([1, 0]) == PureState([1j, 0])
    assert PureState([1, 0]) != PureState([SQ2, SQ2])
    with pytest.raises(ValueError):
        PureState([2, 0])
    assert PureState.from_vector([2, 0]) == PureState([1, 0])


def test_transition_probability_examples(pair_dim2):
    a, b = pair_dim2
    assert transition_probability(a, a) == 1
    assert transition_probability([1, 0], [0, 1]) == 0
    assert transition_probability(a, b) == pytest.approx(0.5, abs=1e-15)
    assert trace_of_product(a, b) == pytest.approx(0.5, abs=1e-15)


def test_metrics_examples(pair_dim2):
    a, b = pair_dim2
    assert rho_n(a, a) == 0 and rho_tr(a, a) == 0
    assert rho_n([1, 0], [0, 1]) == 1 and rho_tr([1, 0], [0, 1]) == 2
    assert rho_n(a, b) == pytest.approx(0.70710678, abs=1e-8)
    assert rho_tr(a, b) == pytest.approx(1.41421356, abs=1e-8)
    o = oracle_distances(a, b)
    assert o["rho_n"] == pytest.approx(rho_n(a, b), abs=1e-12)
    assert o["rho_tr"] == pytest.approx(rho_tr(a, b), abs=1e-12)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        rho_n([1, 0], [1, 0, 0])


def test_diff_eigenvalues_examples():
    assert diff_eigenvalues([1, 0], [1j, 0]) == (0.0, 0.0)
    assert diff_eigenvalues([1, 0], [0, 1]) == (1.0, -1.0)


def test_diff_eigenvalues_vs_oracle_dim5(rng):
    a, b = random_units(5, 2, rng)
    lp, lm = diff_eigenvalues(a, b)
    spec = dense_spectrum(materialize(a) - materialize(b))
    assert spec[0] == pytest.approx(lp, abs=1e-10) and spec[-1] == pytest.approx(lm, abs=1e-10)
    assert np.all(np.abs(spec[1:-1]) < 1e-10)


def test_materialize_examples(rng):
    np.testing.assert_array_equal(materialize([1, 0]), [[1, 0], [0, 0]])
    np.testing.assert_allclose(materialize([SQ2, SQ2]), np.full((2, 2), 0.5), atol=1e-15)
    for v in random_units(7, 10, rng):
        M = materialize(v)
        assert abs(np.trace(M) - 1) <= 1e-12
        assert np.max(np.abs(M @ M - M)) <= 1e-12
        assert np.max(np.abs(M - M.conj().T)) <= 1e-12


def test_dense_spectrum_examples(pair_dim2):
    np.testing.assert_allclose(dense_spectrum(np.eye(3)), [1, 1, 1])
    np.testing.assert_allclose(dense_spectrum(np.diag([2.0, -1.0])), [2, -1])
    np.testing.assert_allclose(dense_spectrum(np.diag([-1.0, 2.0])), [2, -1])
    a, b = pair_dim2
    c = np.array([1, 0, 0]), np.array([SQ2, SQ2, 0])
    np.testing.assert_allclose(dense_spectrum(materialize(c[0]) - materialize(c[1])), [SQ2, 0, -SQ2], atol=1e-10)


@pytest.mark.parametrize("dim", [2, 3, 6, 20])
def test_dense_spectrum_matches_lapack(dim, rng):
    X = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    H = X + X.conj().T
    np.testing.assert_allclose(dense_spectrum(H), np.linalg.eigvalsh(H)[::-1], atol=1e-10)


def test_dense_spectrum_iteration_cap(rng):
    X = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    with pytest.raises(ConvergenceFailure):
        dense_spectrum(X + X.conj().T, max_sweeps=1)


def test_dense_spectrum_rejects_non_hermitian():
    with pytest.raises(ValueError):
        dense_spectrum([[0, 1], [0, 0]])


def test_norm_bound_examples(pair_dim2):
    a, b = pair_dim2
    assert norm_bound_check(a, a) == (0.0, 0.0, True)
    lhs, rhs, ok = norm_bound_check(a, b)
    assert lhs == pytest.approx(0.70711, abs=1e-5) and rhs == pytest.approx(0.76537, abs=1e-5) and ok
    lhs, rhs, ok = norm_bound_check(a, -a)
    assert lhs == 0 and rhs == 2 and ok


@pytest.mark.parametrize("dim", [2, 4, 16])
def test_metric_invariants(dim, rng):
    for _ in range(200):
        a, b, c = random_units(dim, 3, rng)
        assert rho_tr(a, b) == 2 * rho_n(a, b)
        assert rho_n(a, c) <= rho_n(a, b) + rho_n(b, c) + 1e-10
        assert rho_tr(a, c) <= rho_tr(a, b) + rho_tr(b, c) + 1e-10
        th, et = rng.uniform(0, 2 * np.pi, 2)
        assert abs(rho_n(np.exp(1j * th) * a, np.exp(1j * et) * b) - rho_n(a, b)) <= 1e-12
        assert abs(trace_of_product(a, b) - transition_probability(a, b)) <= 1e-12
        assert transition_probability(a, b) == pytest.approx(transition_probability(b, a), abs=1e-15)


def test_rho_n_precise_for_close_states(rng):
    a = random_units(4, 1, rng)[0]
    d = random_units(4, 1, rng)[0]
    d = d - np.vdot(a, d) * a
    d /= np.linalg.norm(d)
    for t in (1e-4, 1e-8, 1e-12):
        b = np.cos(t) * a + np.sin(t) * d
        assert rho_n(a, b) == pytest.approx(np.sin(t), rel=1e-6)


def test_rho_n_matrix_matches_scalar(rng):
    A, B = random_units(3, 4, rng), random_units(3, 5, rng)
    M = rho_n_matrix(A, B)
    for i in range(4):
        for j in range(5):
            assert M[i, j] == pytest.approx(rho_n(A[i], B[j]), abs=1e-14)
