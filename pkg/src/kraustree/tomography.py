"""Process matrices, process tomography, and state/process metrics.

A channel ρ ↦ Σ E_j ρ E_j† is expressed in a fixed operator basis as
ρ ↦ Σ_mn χ_mn Λ_m ρ Λ_n†.  The χ matrix is Hermitian and PSD for completely
positive maps, has unit trace for trace-preserving ones, and its (0,0)
element is the process fidelity against the identity map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bases import OperatorBasis, build_basis
from .channels import KrausChannel, apply, channel, check_density
from .errors import (
    BasisMismatch,
    DimensionMismatch,
    InvalidState,
    NotDensityMatrix,
    NotHermitian,
    NotPSD,
    SingularDesign,
)
from .linalg import (
    eig_hermitian,
    hermitianize,
    sqrt_psd,
    trace_norm,
    von_neumann_entropy,
)


@dataclass(frozen=True)
class ChiMatrix:
    """Process matrix in a fixed operator basis."""

    basis: OperatorBasis
    mat: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.dim


def chi_from_channel(ch: KrausChannel, basis: OperatorBasis | None = None) -> ChiMatrix:
    """Expand each Kraus operator in the basis (coefficients Tr(Λ_m†E_j)/d)
    and accumulate χ_mn = Σ_j c_jm c_jn*."""
    if basis is None:
        basis = build_basis(ch.dim)
    if basis.dim != ch.dim:
        raise DimensionMismatch(
            f"basis dim {basis.dim} does not match channel dim {ch.dim}"
        )
    d = ch.dim
    coeff = np.array(
        [[np.trace(lam.conj().T @ op) / d for lam in basis.ops] for op in ch.ops]
    )
    return ChiMatrix(basis, hermitianize(coeff.T @ coeff.conj()))


def channel_from_chi(chi: ChiMatrix) -> KrausChannel:
    """Kraus operators from the χ eigendecomposition, dropping eigenvalues
    below 1e-10."""
    mat = np.asarray(chi.mat)
    if np.max(np.abs(mat - mat.conj().T)) > 1e-8:
        raise NotHermitian("chi matrix is not Hermitian")
    decomp = eig_hermitian(mat)
    if np.min(decomp.values) < -1e-8:
        raise NotPSD(f"chi has negative eigenvalue {np.min(decomp.values):.3e}")
    ops = []
    for k in range(decomp.values.size):
        mu = decomp.values[k]
        if mu < 1e-10:
            continue
        op = sum(
            decomp.vectors[m, k] * basis_op
            for m, basis_op in enumerate(chi.basis.ops)
        )
        ops.append(np.sqrt(mu) * op)
    gram = sum(op.conj().T @ op for op in ops)
    strict = np.max(np.abs(gram - np.eye(chi.dim))) <= 1e-8
    return channel(ops, label="from_chi", strict=strict)


def default_process_inputs(d: int) -> list[np.ndarray]:
    """The standard d² informationally complete inputs: basis states plus
    pairwise real and imaginary superpositions."""
    states = []
    for j in range(d):
        v = np.zeros(d, dtype=complex)
        v[j] = 1.0
        states.append(np.outer(v, v.conj()))
    for phase in (1.0, 1.0j):
        for j in range(d):
            for k in range(j + 1, d):
                v = np.zeros(d, dtype=complex)
                v[j] = 1.0
                v[k] = phase
                v /= np.sqrt(2.0)
                states.append(np.outer(v, v.conj()))
    return states


def process_tomography(
    black_box: KrausChannel | Callable[[np.ndarray], np.ndarray],
    basis: OperatorBasis,
    inputs: list[np.ndarray] | None = None,
) -> ChiMatrix:
    """Reconstruct χ by linear inversion from exact output states of a map
    probed on an informationally complete input set."""
    if isinstance(black_box, KrausChannel):
        ch = black_box
        black_box = lambda rho: apply(ch, rho)  # noqa: E731
    if inputs is None:
        inputs = default_process_inputs(basis.dim)
    d = basis.dim
    if len(inputs) < d * d:
        raise SingularDesign(f"need at least {d * d} input states, got {len(inputs)}")
    s_in = np.column_stack([np.asarray(r, dtype=complex).reshape(-1) for r in inputs])
    singulars = np.linalg.svd(s_in, compute_uv=False)
    if singulars[-1] < 1e-10 * singulars[0]:
        raise SingularDesign("input states are not linearly independent")
    s_out = np.column_stack(
        [np.asarray(black_box(r), dtype=complex).reshape(-1) for r in inputs]
    )
    transfer = s_out @ np.linalg.pinv(s_in)
    chi = np.empty((d * d, d * d), dtype=complex)
    for m, lam_m in enumerate(basis.ops):
        for n, lam_n in enumerate(basis.ops):
            probe = np.kron(lam_m, lam_n.conj())
            chi[m, n] = np.trace(probe.conj().T @ transfer) / (d * d)
    return ChiMatrix(basis, hermitianize(chi))


def chi_identity_fidelity(x: ChiMatrix | KrausChannel) -> float:
    """Process fidelity against the identity map: Re χ₀₀."""
    if isinstance(x, KrausChannel):
        x = chi_from_channel(x)
    return float(np.asarray(x.mat)[0, 0].real)


def _check_psd_chi(chi: ChiMatrix) -> np.ndarray:
    mat = np.asarray(chi.mat)
    if np.max(np.abs(mat - mat.conj().T)) > 1e-8:
        raise NotHermitian("chi matrix is not Hermitian")
    vals = np.linalg.eigvalsh(hermitianize(mat))
    if vals[0] < -1e-8:
        raise NotPSD(f"chi has negative eigenvalue {vals[0]:.3e}")
    return hermitianize(mat)


def avg_operation_fidelity(chi_a: ChiMatrix, chi_b: ChiMatrix) -> float:
    """Fidelity [Tr√(√a b √a)]² of the unit-trace-normalized χ matrices."""
    if (chi_a.basis.kind, chi_a.basis.dim) != (chi_b.basis.kind, chi_b.basis.dim):
        raise BasisMismatch(
            f"cannot compare {chi_a.basis.kind}(d={chi_a.basis.dim}) with "
            f"{chi_b.basis.kind}(d={chi_b.basis.dim})"
        )
    a = _check_psd_chi(chi_a)
    b = _check_psd_chi(chi_b)
    a = a / np.trace(a).real
    b = b / np.trace(b).real
    overlap = trace_norm(sqrt_psd(b) @ sqrt_psd(a))
    return float(np.clip(overlap * overlap, 0.0, 1.0))


def state_fidelity(rho_t: np.ndarray, rho: np.ndarray) -> float:
    """State fidelity [Tr√(√ρ_T ρ √ρ_T)]²."""
    try:
        rho_t = check_density(rho_t)
        rho = check_density(rho)
    except NotDensityMatrix as exc:
        raise InvalidState(str(exc)) from exc
    overlap = trace_norm(sqrt_psd(rho) @ sqrt_psd(rho_t))
    return float(np.clip(overlap * overlap, 0.0, 1.0))


def rel_entropy_coherence(rho: np.ndarray) -> float:
    """Relative entropy of coherence S(diag ρ) − S(ρ) in bits, with the
    diagonal taken in the computational (Fock) basis."""
    try:
        rho = check_density(rho)
    except NotDensityMatrix as exc:
        raise InvalidState(str(exc)) from exc
    diag = np.diag(np.diag(rho))
    return max(0.0, von_neumann_entropy(diag) - von_neumann_entropy(rho))
