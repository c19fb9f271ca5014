"""Dense complex linear algebra: Hermitian eigensolver, functional calculus,
regularized inverse, isometry completion, and norms.

All matrices are dense numpy arrays of complex128; dimensions in this package
stay tiny (at most a few dozen), so accuracy wins over speed everywhere.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import (
    NegativeEigenvalue,
    NoConvergence,
    NotDensityMatrix,
    NotHermitian,
    NotIsometry,
    NotSquare,
    Singular,
)

HERMITIAN_RTOL = 1e-9
CLAMP_RTOL = 1e-10
ISOMETRY_ATOL = 1e-8
COND_LIMIT = 1e12


class EigenDecomposition(NamedTuple):
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


def as_matrix(a) -> np.ndarray:
    """Coerce input to a 2-D complex array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise NotSquare(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.isfinite(m).all():
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def check_square(a: np.ndarray) -> np.ndarray:
    """Coerce to a square complex matrix or raise NotSquare."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitianize(a: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (a + a†) / 2."""
    return (a + a.conj().T) / 2


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(np.asarray(a, dtype=complex), 2))


def eig_hermitian(m) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The input is symmetrized before decomposing; asymmetry beyond
    1e-9 × spectral norm raises NotHermitian.
    """
    m = check_square(m)
    scale = spectral_norm(m)
    if spectral_norm(m - m.conj().T) > HERMITIAN_RTOL * max(scale, 1.0):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    try:
        values, vectors = np.linalg.eigh(hermitianize(m))
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigensolver failed: {exc}") from exc
    return EigenDecomposition(values, vectors)


def sqrt_psd(m) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in [-1e-10 × spectral norm, 0) are clamped to zero; anything
    below that raises NegativeEigenvalue.
    """
    values, vectors = eig_hermitian(m)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    clamp = CLAMP_RTOL * max(scale, 1.0)
    if np.min(values) < -clamp:
        raise NegativeEigenvalue(
            f"eigenvalue {np.min(values):.3e} below clamp -{clamp:.3e}"
        )
    root = np.sqrt(np.clip(values, 0.0, None))
    return hermitianize((vectors * root) @ vectors.conj().T)


def reg_inverse(m, epsilon: float) -> np.ndarray:
    """Inverse of (m + ε·I); with ε = 0 the input must be well conditioned."""
    m = check_square(m)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    d = m.shape[0]
    shifted = m + epsilon * np.eye(d)
    if epsilon == 0 and np.linalg.cond(shifted) >= COND_LIMIT:
        raise Singular("matrix is numerically singular; pass epsilon > 0")
    try:
        return np.linalg.inv(shifted)
    except np.linalg.LinAlgError as exc:
        raise Singular(f"inversion failed: {exc}") from exc


def expm(m) -> np.ndarray:
    """Matrix exponential.

    Hermitian and anti-Hermitian inputs go through the eigensolver (so
    unitarity of exp(anti-Hermitian) is exact up to rounding); everything
    else falls back to scaling-and-squaring.
    """
    m = check_square(m)
    scale = spectral_norm(m)
    tol = HERMITIAN_RTOL * max(scale, 1.0)
    if spectral_norm(m - m.conj().T) <= tol:
        values, vectors = np.linalg.eigh(hermitianize(m))
        return (vectors * np.exp(values)) @ vectors.conj().T
    if spectral_norm(m + m.conj().T) <= tol:
        values, vectors = np.linalg.eigh(hermitianize(-1j * m))
        return (vectors * np.exp(1j * values)) @ vectors.conj().T
    return scipy.linalg.expm(m)


def complete_isometry(v) -> np.ndarray:
    """Extend orthonormal columns to a full unitary.

    The completion is deterministic: canonical basis vectors are
    orthonormalized in ascending index order against the existing columns,
    skipping candidates whose residual norm falls below 1e-8.  The input
    columns are preserved exactly.
    """
    v = as_matrix(v)
    n, k = v.shape
    if k > n:
        raise NotIsometry(f"more columns ({k}) than rows ({n})")
    if k > 0 and spectral_norm(v.conj().T @ v - np.eye(k)) > ISOMETRY_ATOL:
        raise NotIsometry("columns are not orthonormal within tolerance")
    cols = [v[:, j].copy() for j in range(k)]
    for idx in range(n):
        if len(cols) == n:
            break
        cand = np.zeros(n, dtype=complex)
        cand[idx] = 1.0
        for _ in range(2):
            for c in cols:
                cand = cand - c * (c.conj() @ cand)
        norm = np.linalg.norm(cand)
        if norm < ISOMETRY_ATOL:
            continue
        cols.append(cand / norm)
    if len(cols) < n:
        raise NotIsometry("could not complete columns to a unitary")
    u = np.column_stack(cols)
    u[:, :k] = v
    return u


def trace_norm(m) -> float:
    """Sum of singular values of a square matrix."""
    m = check_square(m)
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def von_neumann_entropy(rho) -> float:
    """Entropy −Σ λ log₂ λ in bits; eigenvalues below 1e-12 contribute zero."""
    rho = check_square(rho)
    if abs(np.trace(rho) - 1.0) > 1e-8:
        raise NotDensityMatrix(f"trace is {np.trace(rho):.6g}, expected 1")
    try:
        values, _ = eig_hermitian(rho)
    except NotHermitian as exc:
        raise NotDensityMatrix("density matrix must be Hermitian") from exc
    if np.min(values) < -1e-8:
        raise NotDensityMatrix(f"negative eigenvalue {np.min(values):.3e}")
    lam = values[values > 1e-12]
    return float(-np.sum(lam * np.log2(lam)))


def vec(a: np.ndarray) -> np.ndarray:
    """Row-major vectorization, so vec(AρB) = (A ⊗ Bᵀ) vec(ρ)."""
    return np.asarray(a, dtype=complex).reshape(-1)


def unvec(x: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of vec for a rows × cols matrix."""
    return np.asarray(x, dtype=complex).reshape(rows, cols)


def matrix_to_json(m: np.ndarray) -> dict:
    """Serialize a matrix as {rows, cols, re, im} with row-major entry lists."""
    m = as_matrix(m)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": [float(x) for x in m.real.reshape(-1)],
        "im": [float(x) for x in m.imag.reshape(-1)],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    """Inverse of matrix_to_json."""
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=float).reshape(rows, cols)
    im = np.asarray(obj["im"], dtype=float).reshape(rows, cols)
    return re + 1j * im
