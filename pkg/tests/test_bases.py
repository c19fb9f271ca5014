"""Operator-basis properties."""

from __future__ import annotations

import numpy as np
import pytest

from kraustree.bases import PAULI_X, PAULI_Y, build_basis
from kraustree.errors import UnsupportedDim

from helpers import random_density


@pytest.mark.parametrize("dim", [2, 3, 4])
class TestBasisStructure:
    def test_count_and_identity_first(self, dim):
        basis = build_basis(dim)
        assert len(basis.ops) == dim * dim
        assert np.array_equal(basis.ops[0], np.eye(dim, dtype=complex))

    def test_orthogonality(self, dim):
        basis = build_basis(dim)
        gram = np.array(
            [[np.trace(a.conj().T @ b) for b in basis.ops] for a in basis.ops]
        )
        assert np.max(np.abs(gram - dim * np.eye(dim * dim))) < 1e-12

    def test_completeness_relation(self, dim):
        rho = random_density(np.random.default_rng(dim), dim)
        total = sum(op @ rho @ op.conj().T for op in build_basis(dim).ops)
        assert np.max(np.abs(total - dim * np.eye(dim))) < 1e-12

    def test_gram_adjoint_sum(self, dim):
        total = sum(op.conj().T @ op for op in build_basis(dim).ops)
        assert np.max(np.abs(total - dim * dim * np.eye(dim))) < 1e-12


def test_two_qubit_labels_are_lexicographic():
    basis = build_basis(4)
    assert basis.labels[:5] == ("II", "IX", "IY", "IZ", "XI")
    assert basis.labels[-1] == "ZZ"
    assert np.array_equal(basis.ops[6], np.kron(PAULI_X, PAULI_Y))


def test_qutrit_elements_include_antisymmetric_variants():
    basis = build_basis(3)
    a = np.sqrt(3 / 2)
    assert np.allclose(
        basis.ops[2], a * np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]])
    )
    assert np.allclose(basis.ops[8], np.sqrt(1 / 2) * np.diag([1, 1, -2]))


def test_unsupported_dimension():
    with pytest.raises(UnsupportedDim):
        build_basis(5)
