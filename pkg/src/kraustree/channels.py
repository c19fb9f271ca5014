"""Channel algebra: Kraus sets, density matrices, Choi matrices, POVMs,
Lindblad steps, and the conversions among them.

Channel equality throughout the package means Choi-matrix distance below
1e-8 — Kraus representations are never compared operator by operator,
because they are unique only up to an isometric remix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadParameter,
    DimensionMismatch,
    IncompleteChannel,
    NotDensityMatrix,
    NotUnitary,
    StepTooLarge,
)
from .linalg import (
    check_square,
    hermitianize,
    matrix_from_json,
    matrix_to_json,
    spectral_norm,
)

COMPLETENESS_ATOL = 1e-8


@dataclass
class KrausChannel:
    """Quantum operation ρ ↦ Σ_j E_j ρ E_j†.

    strict=True asserts the completeness relation Σ E_j†E_j = I;
    strict=False marks a sub-normalized set (a partial operation, e.g. one
    branch of an adaptive tree) whose operator sum is bounded by I.
    """

    dim: int
    ops: list[np.ndarray] = field(default_factory=list)
    label: str = ""
    strict: bool = True

    @property
    def rank(self) -> int:
        return len(self.ops)


def gram_sum(ops: list[np.ndarray], dim: int) -> np.ndarray:
    """Σ E_j†E_j for a list of Kraus operators."""
    total = np.zeros((dim, dim), dtype=complex)
    for e in ops:
        total = total + e.conj().T @ e
    return hermitianize(total)


def channel(
    ops,
    label: str = "",
    strict: bool = True,
    atol: float = COMPLETENESS_ATOL,
) -> KrausChannel:
    """Validated channel constructor; the dimension is inferred from the ops.

    Strict channels must satisfy ‖Σ E†E − I‖ ≤ atol; flagged channels must
    satisfy Σ E†E ≤ I up to the same tolerance.  The rank of a canonical
    channel never exceeds d², but composition products may — the upper
    bound is therefore not enforced here.
    """
    mats = [check_square(op) for op in ops]
    if not mats:
        raise BadParameter("a channel needs at least one Kraus operator")
    d = mats[0].shape[0]
    for m in mats[1:]:
        if m.shape[0] != d:
            raise DimensionMismatch("Kraus operators act on different dimensions")
    gram = gram_sum(mats, d)
    if strict:
        residual = spectral_norm(gram - np.eye(d))
        if residual > atol:
            raise IncompleteChannel(
                f"completeness residual {residual:.3e} exceeds {atol:.3e}"
            )
    else:
        top = float(np.max(np.linalg.eigvalsh(gram)))
        if top > 1.0 + atol:
            raise IncompleteChannel(
                f"operator sum exceeds identity by {top - 1.0:.3e}"
            )
    return KrausChannel(d, mats, label, strict)


def identity_channel(dim: int, label: str = "identity") -> KrausChannel:
    """The trivial channel {I}."""
    return KrausChannel(dim, [np.eye(dim, dtype=complex)], label, True)


def check_density(rho, dim: int | None = None) -> np.ndarray:
    """Validate a density matrix (Hermitian, unit trace, PSD) and return it."""
    rho = check_square(rho)
    if dim is not None and rho.shape[0] != dim:
        raise DimensionMismatch(
            f"density matrix is {rho.shape[0]}-dimensional, expected {dim}"
        )
    if spectral_norm(rho - rho.conj().T) > 1e-9:
        raise NotDensityMatrix("density matrix must be Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-8 or abs(np.trace(rho).imag) > 1e-8:
        raise NotDensityMatrix(f"trace is {np.trace(rho):.6g}, expected 1")
    if float(np.min(np.linalg.eigvalsh(hermitianize(rho)))) < -1e-8:
        raise NotDensityMatrix("density matrix has a negative eigenvalue")
    return hermitianize(rho)


def apply(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """Apply the channel: ρ ↦ Σ E_j ρ E_j†.  Requires a complete channel."""
    rho = check_square(rho)
    if rho.shape[0] != ch.dim:
        raise DimensionMismatch(
            f"state dim {rho.shape[0]} does not match channel dim {ch.dim}"
        )
    if not ch.strict:
        raise IncompleteChannel("apply requires a complete (strict) channel")
    out = np.zeros_like(rho, dtype=complex)
    for e in ch.ops:
        out = out + e @ rho @ e.conj().T
    return hermitianize(out)


def check_completeness(ch: KrausChannel) -> float:
    """Spectral-norm residual ‖Σ E_j†E_j − I‖."""
    return spectral_norm(gram_sum(ch.ops, ch.dim) - np.eye(ch.dim))


def remix(ch: KrausChannel, u) -> KrausChannel:
    """Transform the Kraus list by a unitary: F_k = Σ_j u_kj E_j.

    The channel as a map is unchanged (identical Choi matrix).  The unitary
    may be larger than the channel rank; the operator list is padded with
    zeros to match.
    """
    u = check_square(u)
    size = u.shape[0]
    if size < ch.rank:
        raise DimensionMismatch(
            f"remix unitary is {size}×{size} but the channel has rank {ch.rank}"
        )
    if spectral_norm(u.conj().T @ u - np.eye(size)) > 1e-8:
        raise NotUnitary("remix matrix is not unitary within tolerance")
    padded = list(ch.ops) + [
        np.zeros((ch.dim, ch.dim), dtype=complex) for _ in range(size - ch.rank)
    ]
    new_ops = []
    for k in range(size):
        acc = np.zeros((ch.dim, ch.dim), dtype=complex)
        for j in range(size):
            acc = acc + u[k, j] * padded[j]
        new_ops.append(acc)
    return KrausChannel(ch.dim, new_ops, ch.label, ch.strict)


def choi_of(ch: KrausChannel) -> np.ndarray:
    """Choi matrix J = Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|) — input factor first.

    Used as the canonical fingerprint for channel equality; accepts
    sub-normalized channels.
    """
    d = ch.dim
    j = np.zeros((d * d, d * d), dtype=complex)
    for e in ch.ops:
        m = e.T.reshape(-1)
        j = j + np.outer(m, m.conj())
    return j


def choi_distance(a: KrausChannel, b: KrausChannel) -> float:
    """Frobenius distance between Choi matrices — the channel-equality metric."""
    if a.dim != b.dim:
        raise DimensionMismatch("channels act on different dimensions")
    return float(np.linalg.norm(choi_of(a) - choi_of(b)))


def povm_of(ch: KrausChannel) -> list[np.ndarray]:
    """POVM induced by the channel: M_j = E_j†E_j in channel order."""
    if not ch.strict:
        raise IncompleteChannel("POVM extraction requires a complete channel")
    return [hermitianize(e.conj().T @ e) for e in ch.ops]


def kraus_step_from_lindblad(
    terms,
    dt: float,
    dim: int | None = None,
) -> KrausChannel:
    """First-order Kraus step for dρ = Σ κ_j (2 o_j ρ o_j† − o_j†o_j ρ − ρ o_j†o_j) dt.

    Jump operators √(2 κ_j dt)·o_j come first (zero-rate terms contribute
    nothing and are omitted), the no-jump operator I − Σ κ_j dt o_j†o_j
    last.  Completeness holds to O((κ dt)²); the channel is validated
    against that analytic bound.  Steps with κ dt ‖o†o‖ ≥ 0.05 are refused.
    """
    parsed = []
    for rate, op in terms:
        rate = float(rate)
        if rate < 0:
            raise BadParameter(f"negative rate {rate}")
        parsed.append((rate, check_square(op)))
    if not parsed and dim is None:
        raise BadParameter("dimension required when the generator has no terms")
    d = dim if dim is not None else parsed[0][1].shape[0]
    for _, op in parsed:
        if op.shape[0] != d:
            raise DimensionMismatch("Lindblad operators act on different dimensions")
    if dt < 0:
        raise BadParameter(f"negative time step {dt}")
    norms = [spectral_norm(op.conj().T @ op) for _, op in parsed]
    if parsed and max(k * dt * n for (k, _), n in zip(parsed, norms)) >= 0.05:
        raise StepTooLarge("κ·dt·‖o†o‖ must stay below 0.05")
    ops = [np.sqrt(2 * k * dt) * op for k, op in parsed if k > 0 and dt > 0]
    decay = np.zeros((d, d), dtype=complex)
    for k, op in parsed:
        decay = decay + k * dt * (op.conj().T @ op)
    ops.append(np.eye(d, dtype=complex) - decay)
    total_kdt = sum(k * dt for k, _ in parsed)
    bound = (total_kdt**2) * (max(norms) ** 2 if norms else 0.0)
    return channel(
        ops,
        label="lindblad-step",
        strict=True,
        atol=max(COMPLETENESS_ATOL, bound * (1 + 1e-9) + 1e-12),
    )


def compose(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    """Sequential application a then b: operators {B_i A_j}, row-major in (i, j)."""
    if a.dim != b.dim:
        raise DimensionMismatch("composed channels act on different dimensions")
    ops = [bi @ aj for bi in b.ops for aj in a.ops]
    strict = a.strict and b.strict
    slack = 2 * (check_completeness(a) + check_completeness(b)) if strict else 0.0
    return channel(
        ops,
        label=f"{b.label}*{a.label}" if a.label and b.label else "",
        strict=strict,
        atol=max(COMPLETENESS_ATOL, slack),
    )


def channel_to_json(ch: KrausChannel) -> dict:
    """Serialize a channel as {dim, label, strict, ops: [matrix...]}."""
    return {
        "dim": int(ch.dim),
        "label": ch.label,
        "strict": bool(ch.strict),
        "ops": [matrix_to_json(e) for e in ch.ops],
    }


def channel_from_json(obj: dict, atol: float = COMPLETENESS_ATOL) -> KrausChannel:
    """Deserialize and validate a channel produced by channel_to_json."""
    return channel(
        [matrix_from_json(m) for m in obj["ops"]],
        label=str(obj.get("label", "")),
        strict=bool(obj.get("strict", True)),
        atol=atol,
    )
