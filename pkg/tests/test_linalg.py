"""Tests for the dense linear-algebra kernel."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kraustree.errors import (
    NegativeEigenvalue,
    NotDensityMatrix,
    NotHermitian,
    NotIsometry,
    NotSquare,
    Singular,
)
from kraustree.linalg import (
    complete_isometry,
    eig_hermitian,
    expm,
    matrix_from_json,
    matrix_to_json,
    reg_inverse,
    spectral_norm,
    sqrt_psd,
    trace_norm,
    unvec,
    vec,
    von_neumann_entropy,
)

SEEDS = st.integers(0, 2**32 - 1)


def _random_complex(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def _random_hermitian(rng, d):
    a = _random_complex(rng, d, d)
    return (a + a.conj().T) / 2


def _random_unitary(rng, d):
    q, r = np.linalg.qr(_random_complex(rng, d, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_eig_hermitian_diagonal():
    values, vectors = eig_hermitian(np.diag([3.0, 1.0]))
    assert np.allclose(values, [1.0, 3.0])
    assert np.allclose(np.abs(vectors), [[0.0, 1.0], [1.0, 0.0]])


def test_eig_hermitian_identity():
    values, _ = eig_hermitian(np.eye(4))
    assert np.allclose(values, np.ones(4))


def test_eig_hermitian_rejects_non_square():
    with pytest.raises(NotSquare):
        eig_hermitian(np.ones((2, 3)))


def test_eig_hermitian_rejects_asymmetric():
    with pytest.raises(NotHermitian):
        eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


@settings(max_examples=25, deadline=None)
@given(SEEDS)
def test_eig_hermitian_reconstructs(seed):
    rng = np.random.default_rng(seed)
    h = _random_hermitian(rng, 5)
    values, vectors = eig_hermitian(h)
    assert np.all(np.diff(values) >= 0)
    recon = (vectors * values) @ vectors.conj().T
    assert spectral_norm(recon - h) < 1e-10 * max(spectral_norm(h), 1.0)
    assert spectral_norm(vectors.conj().T @ vectors - np.eye(5)) < 1e-10


def test_sqrt_psd_diagonal():
    assert np.allclose(sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))


def test_sqrt_psd_identity():
    assert np.allclose(sqrt_psd(np.eye(3)), np.eye(3))


def test_sqrt_psd_rejects_negative():
    with pytest.raises(NegativeEigenvalue):
        sqrt_psd(np.diag([1.0, -0.5]))


@settings(max_examples=25, deadline=None)
@given(SEEDS)
def test_sqrt_psd_squares_back(seed):
    rng = np.random.default_rng(seed)
    b = _random_complex(rng, 4, 4)
    a = b.conj().T @ b
    r = sqrt_psd(a)
    assert spectral_norm(r @ r - a) < 1e-9 * max(spectral_norm(a), 1.0)
    assert spectral_norm(r - r.conj().T) < 1e-10 * max(spectral_norm(r), 1.0)


def test_reg_inverse_exact():
    assert np.allclose(reg_inverse(np.diag([2.0, 4.0]), 0.0), np.diag([0.5, 0.25]))


def test_reg_inverse_regularized_singular():
    out = reg_inverse(np.diag([1.0, 0.0]), 1e-9)
    assert np.allclose(np.diag(out), [1.0 / (1.0 + 1e-9), 1e9])


def test_reg_inverse_rejects_singular_without_epsilon():
    with pytest.raises(Singular):
        reg_inverse(np.diag([1.0, 0.0]), 0.0)


@settings(max_examples=25, deadline=None)
@given(SEEDS)
def test_reg_inverse_residual(seed):
    rng = np.random.default_rng(seed)
    m = _random_complex(rng, 4, 4) + 4.0 * np.eye(4)
    eps = float(rng.uniform(0, 0.1))
    out = reg_inverse(m, eps)
    assert spectral_norm(out @ (m + eps * np.eye(4)) - np.eye(4)) < 1e-9


def test_expm_zero_is_identity():
    assert np.allclose(expm(np.zeros((3, 3))), np.eye(3))


def test_expm_diagonal():
    assert np.allclose(expm(np.diag([np.log(2.0), 0.0])), np.diag([2.0, 1.0]))


@settings(max_examples=25, deadline=None)
@given(SEEDS)
def test_expm_anti_hermitian_is_unitary(seed):
    rng = np.random.default_rng(seed)
    h = _random_hermitian(rng, 4)
    u = expm(1j * h)
    assert spectral_norm(u @ u.conj().T - np.eye(4)) < 1e-9


@settings(max_examples=25, deadline=None)
@given(SEEDS)
def test_expm_commuting_product(seed):
    rng = np.random.default_rng(seed)
    basis = _random_unitary(rng, 4)
    a = basis @ np.diag(rng.standard_normal(4)) @ basis.conj().T
    b = basis @ np.diag(rng.standard_normal(4)) @ basis.conj().T
    assert spectral_norm(expm(a + b) - expm(a) @ expm(b)) < 1e-9 * max(
        spectral_norm(expm(a + b)), 1.0
    )


def test_complete_isometry_first_basis_vector():
    assert np.allclose(complete_isometry(np.array([[1.0], [0.0]])), np.eye(2))


def test_complete_isometry_canonical_rule():
    u = complete_isometry(np.array([[0.0], [1.0]]))
    assert np.allclose(u[:, 0], [0.0, 1.0])
    assert np.allclose(u[:, 1], [1.0, 0.0])


def test_complete_isometry_rejects_non_orthonormal():
    with pytest.raises(NotIsometry):
        complete_isometry(np.array([[1.0], [1.0]]))


@settings(max_examples=25, deadline=None)
@given(SEEDS)
def test_complete_isometry_preserves_and_unitary(seed):
    rng = np.random.default_rng(seed)
    v = np.linalg.qr(_random_complex(rng, 8, 4))[0]
    u = complete_isometry(v)
    assert u.shape == (8, 8)
    assert np.array_equal(u[:, :4], v)
    assert spectral_norm(u.conj().T @ u - np.eye(8)) < 1e-9


def test_trace_norm_diagonal():
    assert trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0)


def test_trace_norm_unitary():
    rng = np.random.default_rng(7)
    assert trace_norm(_random_unitary(rng, 5)) == pytest.approx(5.0)


@settings(max_examples=25, deadline=None)
@given(SEEDS)
def test_trace_norm_matches_eig_oracle(seed):
    rng = np.random.default_rng(seed)
    m = _random_complex(rng, 5, 5)
    singular_sq, _ = eig_hermitian(m.conj().T @ m)
    oracle = float(np.sum(np.sqrt(np.clip(singular_sq, 0.0, None))))
    assert trace_norm(m) == pytest.approx(oracle, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(SEEDS)
def test_trace_norm_unitarily_invariant(seed):
    rng = np.random.default_rng(seed)
    m = _random_complex(rng, 4, 4)
    u = _random_unitary(rng, 4)
    v = _random_unitary(rng, 4)
    assert trace_norm(u @ m @ v) == pytest.approx(trace_norm(m), abs=1e-9)


def test_entropy_pure_state():
    rho = np.zeros((3, 3))
    rho[0, 0] = 1.0
    assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)


def test_entropy_maximally_mixed():
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0)


def test_entropy_half_half():
    assert von_neumann_entropy(np.diag([0.5, 0.5, 0.0, 0.0])) == pytest.approx(1.0)


def test_entropy_rejects_unnormalized():
    with pytest.raises(NotDensityMatrix):
        von_neumann_entropy(np.eye(2))


def test_vec_row_major_identity():
    rng = np.random.default_rng(3)
    a = _random_complex(rng, 3, 3)
    b = _random_complex(rng, 3, 3)
    rho = _random_complex(rng, 3, 3)
    lhs = vec(a @ rho @ b)
    rhs = np.kron(a, b.T) @ vec(rho)
    assert np.allclose(lhs, rhs)
    assert np.allclose(unvec(vec(rho), 3, 3), rho)


def test_matrix_json_round_trip():
    rng = np.random.default_rng(11)
    m = _random_complex(rng, 3, 5)
    assert np.allclose(matrix_from_json(matrix_to_json(m)), m)
