"""Realize rank-2 Kraus pairs as unitaries on the ancilla ⊗ system composite,
and read Kraus pairs back off such unitaries.

Tensor ordering is ancilla-major with ancilla basis {|g⟩ = 0, |e⟩ = 1}:
composite index a·d + r for ancilla level a and system level r, so each
Kraus block occupies contiguous rows and the pair (e0; e1) is the first
block column of the unitary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NotContraction,
    NotProjector,
    NotUnitary,
    SupportMismatch,
)
from .linalg import check_square, complete_isometry, eig_hermitian, hermitianize, spectral_norm

SUPPORT_ATOL = 1e-8


@dataclass(frozen=True)
class AncillaUnitary:
    """A 2d×2d unitary on the ancilla ⊗ system composite."""

    sys_dim: int
    mat: np.ndarray


def ancilla_unitary(mat) -> AncillaUnitary:
    """Validate evenness and unitarity, then wrap."""
    mat = check_square(mat)
    n = mat.shape[0]
    if n % 2 != 0 or n < 2:
        raise DimensionMismatch(f"composite dimension {n} is not twice a system dim")
    if spectral_norm(mat.conj().T @ mat - np.eye(n)) > 1e-9:
        raise NotUnitary("composite matrix is not unitary within tolerance")
    return AncillaUnitary(n // 2, mat)


def dilate_rank2(e0, e1) -> AncillaUnitary:
    """Unitary sending |ψ⟩⊗|g⟩ to (e0|ψ⟩)⊗|g⟩ + (e1|ψ⟩)⊗|e⟩.

    Requires a complete pair (e0†e0 + e1†e1 = I); the stacked block column
    is preserved exactly and the remaining columns follow the canonical
    completion rule.
    """
    e0 = check_square(e0)
    e1 = check_square(e1)
    if e0.shape != e1.shape:
        raise DimensionMismatch("Kraus pair members have different shapes")
    d = e0.shape[0]
    column = np.vstack([e0, e1])
    if spectral_norm(column.conj().T @ column - np.eye(d)) > SUPPORT_ATOL:
        raise NotContraction("e0†e0 + e1†e1 must equal the identity")
    return ancilla_unitary(complete_isometry(column))


def dilate_partial(e0, e1, support) -> AncillaUnitary:
    """Dilation of a pair defined only on a subspace.

    support must be the orthogonal projector equal to e0†e0 + e1†e1; the
    dilation identity then holds for every |ψ⟩ in its range, with the
    action elsewhere fixed by the canonical completion rule.
    """
    e0 = check_square(e0)
    e1 = check_square(e1)
    support = check_square(support)
    if e0.shape != e1.shape or e0.shape != support.shape:
        raise DimensionMismatch("pair and support have different shapes")
    d = e0.shape[0]
    if (
        spectral_norm(support - support.conj().T) > SUPPORT_ATOL
        or spectral_norm(support @ support - support) > SUPPORT_ATOL
    ):
        raise NotProjector("support is not an orthogonal projector")
    if spectral_norm(e0.conj().T @ e0 + e1.conj().T @ e1 - support) > SUPPORT_ATOL:
        raise SupportMismatch("e0†e0 + e1†e1 does not match the support projector")
    values, vectors = eig_hermitian(support)
    basis = vectors[:, values > 0.5]
    k = basis.shape[1]
    stacked = np.vstack([e0 @ basis, e1 @ basis])
    if k > 0:
        gram = hermitianize(stacked.conj().T @ stacked)
        w, v = np.linalg.eigh(gram)
        stacked = stacked @ (v * (1.0 / np.sqrt(w))) @ v.conj().T
    inner = complete_isometry(stacked)
    frame = complete_isometry(np.vstack([basis, np.zeros((d, k))]))
    return ancilla_unitary(inner @ frame.conj().T)


def extract_rank2(u) -> tuple[np.ndarray, np.ndarray]:
    """Read the Kraus pair off a composite unitary: e_j[r, c] = U[j·d + r, c]."""
    mat = u.mat if isinstance(u, AncillaUnitary) else check_square(u)
    n = mat.shape[0]
    if n % 2 != 0:
        raise DimensionMismatch(f"composite dimension {n} is not twice a system dim")
    d = n // 2
    return mat[:d, :d].copy(), mat[d:, :d].copy()
