"""Symmetric informationally complete POVMs and state reconstruction.

A frame of d² sub-normalized projectors is generated by displacing a fixed
fiducial vector, then conjugated by S^{-1/2} (S the raw frame sum) so the
elements add to the identity exactly.  Measured outcome frequencies determine
the state by linear inversion; a simplex projection of the eigenvalues turns
the possibly indefinite estimate into the closest density matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, NotHermitian, SingularFrame, UnsupportedDim
from .linalg import eig_hermitian, hermitianize

FIDUCIALS: dict[int, list[complex]] = {
    2: [0.8881 + 0.0000j, 0.3251 - 0.3250j],
    3: [0.8124 + 0.0000j, 0.1677 + 0.2911j, 0.2386 + 0.4125j],
    4: [
        0.2012 + 0.0000j,
        -0.3076 + 0.2570j,
        0.0000 + 0.4857j,
        -0.1064 + 0.7427j,
    ],
}


@dataclass(frozen=True)
class ReconstructionResult:
    """Both stages of a state reconstruction plus the probabilities that
    produced it and those the final estimate would predict."""

    rho_linear: np.ndarray
    rho_mle: np.ndarray
    probs_raw: np.ndarray
    probs_fitted: np.ndarray


@dataclass(frozen=True)
class SicPovm:
    """Corrected SIC frame: d² vectors with Σ_k |φ_k⟩⟨φ_k|/d = I."""

    dim: int
    fiducial: np.ndarray
    vectors: tuple[np.ndarray, ...]

    @property
    def elements(self) -> list[np.ndarray]:
        return [np.outer(v, v.conj()) / self.dim for v in self.vectors]


def displacement(d: int, j: int, k: int) -> np.ndarray:
    """Phase-space displacement D_jk = e^{iπjk/d} Σ_m ω^{jm} |k+m mod d⟩⟨m|."""
    omega = np.exp(2j * np.pi / d)
    out = np.zeros((d, d), dtype=complex)
    for m in range(d):
        out[(k + m) % d, m] = omega ** (j * m)
    return np.exp(1j * np.pi * j * k / d) * out


def build_sic(d: int) -> SicPovm:
    """Displace the dimension-d fiducial over j, k ∈ {1..d} (flat index
    d(j−1)+(k−1)) and correct the frame so the POVM sums to the identity."""
    if d not in FIDUCIALS:
        raise UnsupportedDim(f"no fiducial vector on file for d = {d}")
    fid = np.array(FIDUCIALS[d], dtype=complex)
    fid = fid / np.linalg.norm(fid)
    raw = [displacement(d, j, k) @ fid for j in range(1, d + 1) for k in range(1, d + 1)]
    frame_sum = sum(np.outer(v, v.conj()) for v in raw) / d
    decomp = eig_hermitian(frame_sum)
    if np.min(decomp.values) <= 1e-12:
        raise SingularFrame("fiducial orbit does not span the space")
    inv_sqrt = (decomp.vectors * (1.0 / np.sqrt(decomp.values))) @ decomp.vectors.conj().T
    vectors = tuple(inv_sqrt @ v for v in raw)
    return SicPovm(d, fid, vectors)


def povm_probabilities(povm: SicPovm | list[np.ndarray], rho: np.ndarray) -> np.ndarray:
    """Born probabilities Tr(M_k ρ), with −1e-12-scale dust clipped to 0."""
    elements = povm.elements if isinstance(povm, SicPovm) else list(povm)
    rho = np.asarray(rho, dtype=complex)
    if elements[0].shape != rho.shape:
        raise BadParameter(
            f"POVM acts on dim {elements[0].shape[0]}, state has dim {rho.shape[0]}"
        )
    probs = np.array([np.trace(m @ rho).real for m in elements])
    return np.where(np.abs(probs) < 1e-12, 0.0, probs)


def linear_inversion(povm: SicPovm | list[np.ndarray], probs: np.ndarray) -> np.ndarray:
    """Solve Tr(M_k ρ) = p_k for a Hermitian unit-trace ρ via pseudo-inverse."""
    elements = povm.elements if isinstance(povm, SicPovm) else list(povm)
    probs = np.asarray(probs, dtype=float)
    d = elements[0].shape[0]
    if probs.shape != (len(elements),):
        raise BadParameter(f"expected {len(elements)} probabilities, got {probs.shape}")
    if abs(probs.sum() - 1.0) > 1e-6:
        raise BadParameter(f"probabilities sum to {probs.sum():.8f}, not 1")
    design = np.array([m.T.reshape(-1) for m in elements])
    singulars = np.linalg.svd(design, compute_uv=False)
    if singulars[0] / max(singulars[-1], 1e-300) > 1e10:
        raise SingularFrame("POVM frame is not informationally complete")
    rho = hermitianize((np.linalg.pinv(design) @ probs.astype(complex)).reshape(d, d))
    trace = np.trace(rho).real
    return rho / trace


def reconstruct_state(
    povm: SicPovm | list[np.ndarray], probs: np.ndarray
) -> ReconstructionResult:
    """Full reconstruction pipeline: linear inversion, then projection to
    the nearest density matrix, then the probabilities it predicts."""
    rho_linear = linear_inversion(povm, probs)
    rho_mle = mle_project(rho_linear)
    fitted = povm_probabilities(povm, rho_mle)
    return ReconstructionResult(rho_linear, rho_mle, np.asarray(probs, float), fitted)


def mle_project(rho: np.ndarray) -> np.ndarray:
    """Closest density matrix in Frobenius norm: project the eigenvalues of a
    Hermitian unit-trace estimate onto the probability simplex."""
    rho = np.asarray(rho, dtype=complex)
    if np.max(np.abs(rho - rho.conj().T)) > 1e-8:
        raise NotHermitian("estimate is not Hermitian")
    trace = np.trace(rho).real
    if abs(trace - 1.0) > 1e-6:
        raise BadParameter(f"estimate has trace {trace:.8f}, not 1")
    decomp = eig_hermitian(rho)
    mu = np.sort(decomp.values)[::-1]
    csum = np.cumsum(mu)
    j = np.arange(1, mu.size + 1)
    positive = mu + (1.0 - csum) / j > 0
    rho_max = int(np.nonzero(positive)[0][-1]) + 1
    theta = (1.0 - csum[rho_max - 1]) / rho_max
    lam = np.maximum(decomp.values + theta, 0.0)
    return (decomp.vectors * lam) @ decomp.vectors.conj().T
