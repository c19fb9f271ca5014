"""Complete orthogonal operator bases used for process matrices.

Every basis satisfies Tr(Λ_i†Λ_j) = d·δ_ij with the identity as element 0.
The d=3 list keeps its published form, in which Λ₃, Λ₆, Λ₈ are the real
antisymmetric variants — orthogonality holds regardless, and nothing
downstream assumes Hermitian basis elements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedDim

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)
PAULI_LABELS = ("I", "X", "Y", "Z")


@dataclass(frozen=True)
class OperatorBasis:
    """d² operators with Tr(Λ_i†Λ_j) = d·δ_ij, element 0 the identity."""

    dim: int
    ops: tuple[np.ndarray, ...]
    labels: tuple[str, ...]
    kind: str


def _qutrit_ops() -> list[np.ndarray]:
    a = np.sqrt(3.0 / 2.0)
    b = np.sqrt(1.0 / 2.0)
    return [
        np.eye(3, dtype=complex),
        a * np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex),
        a * np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex),
        a * np.array([[1, 0, 0], [0, -1, 0], [0, 0, 0]], dtype=complex),
        a * np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex),
        a * np.array([[0, 0, -1], [0, 0, 0], [1, 0, 0]], dtype=complex),
        a * np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex),
        a * np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]], dtype=complex),
        b * np.diag([1.0, 1.0, -2.0]).astype(complex),
    ]


def build_basis(d: int) -> OperatorBasis:
    """Pauli (d=2), the nine-matrix qutrit list (d=3), or two-qubit Pauli
    tensor products in lexicographic order (d=4)."""
    if d == 2:
        return OperatorBasis(2, PAULIS, PAULI_LABELS, "pauli")
    if d == 3:
        ops = _qutrit_ops()
        labels = tuple(f"L{i + 1}" for i in range(9))
        return OperatorBasis(3, tuple(ops), labels, "gellmann9")
    if d == 4:
        ops = []
        labels = []
        for a, la in zip(PAULIS, PAULI_LABELS):
            for b, lb in zip(PAULIS, PAULI_LABELS):
                ops.append(np.kron(a, b))
                labels.append(la + lb)
        return OperatorBasis(4, tuple(ops), tuple(labels), "paulipair")
    raise UnsupportedDim(f"no operator basis defined for d = {d}")
