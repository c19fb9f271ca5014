"""Named channels and tree plans used by the experiment runners.

All channels act on the d=4 photonic-qudit space unless a dimension
parameter says otherwise.  Tree-backed entries (the four-outcome strictly
incoherent operation, the maximally-mixed-state preparation, the SIC-POVM
measurement) are also available as explicit ``TreePlan`` objects.
"""

from __future__ import annotations

import numpy as np

from .bases import build_basis
from .channels import KrausChannel, channel
from .dilation import extract_rank2
from .errors import BadParameter
from .linalg import complete_isometry
from .sic import build_sic
from .tree import TreePlan, recompose, synthesize, tree_plan


def _ket(dim: int, k: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    return v


def odd_parity_stabilizer() -> KrausChannel:
    """Rank-2 channel pumping the even Fock states |0⟩, |2⟩ into the odd
    subspace while acting as a parity check on |1⟩, |3⟩."""
    e0 = np.zeros((4, 4), dtype=complex)
    e0[1, 1] = 1.0
    e0[3, 3] = 1.0
    e1 = np.zeros((4, 4), dtype=complex)
    e1[1, 0] = 1.0
    e1[3, 2] = 1.0
    return channel([e0, e1], label="odd_parity_stab")


def two_photon_dissipation(kt: float) -> KrausChannel:
    """One integrated window of two-photon loss at dimensionless strength
    κ·t: no-jump amplitude decay of |2⟩, |3⟩ plus the pair-loss jump."""
    if kt < 0:
        raise BadParameter(f"kappa*t must be nonnegative, got {kt}")
    e0 = np.diag([1.0, 1.0, np.exp(-kt), np.exp(-3.0 * kt)]).astype(complex)
    e1 = np.zeros((4, 4), dtype=complex)
    e1[0, 2] = np.sqrt(1.0 - np.exp(-2.0 * kt))
    e1[1, 3] = np.sqrt(1.0 - np.exp(-6.0 * kt))
    return channel([e0, e1], label="two_photon_dissipation")


def sio2_channel() -> KrausChannel:
    """Rank-2 strictly incoherent operation: project onto span{|0⟩,|1⟩}
    versus span{|2⟩,|3⟩} (a generalized parity measurement)."""
    e0 = np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex)
    e1 = np.diag([0.0, 0.0, 1.0, 1.0]).astype(complex)
    return channel([e0, e1], label="sio2")


def sio4_channel() -> KrausChannel:
    """Rank-4 strictly incoherent operation: full Fock-basis dephasing via
    the four projectors |k⟩⟨k|."""
    ops = [np.outer(_ket(4, k), _ket(4, k)) for k in range(4)]
    return channel(ops, label="sio4")


def sio4_plan() -> TreePlan:
    """The 2-layer tree realizing the four Fock projectors: a parity split
    at the root, then one Fock projector per branch."""
    root0 = np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex)
    root1 = np.diag([0.0, 0.0, 1.0, 1.0]).astype(complex)
    proj = [np.outer(_ket(4, k), _ket(4, k)) for k in range(4)]
    nodes = {
        "": (root0, root1),
        "0": (proj[0], proj[1]),
        "1": (proj[2], proj[3]),
    }
    return tree_plan(4, nodes, epsilon=0.0)


def _branch_pair(column: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return extract_rank2(complete_isometry(column.reshape(-1, 1)))


def mms_prep_plan() -> TreePlan:
    """Two-layer tree mapping |0⟩⟨0| to the maximally mixed state I₄/4.

    The root splits |0⟩ into (|0⟩+|3⟩)/2 and (|1⟩+|2⟩)/2 across the two
    outcomes; each second-layer node then splits its superposition into the
    two constituent Fock states with equal weight.
    """
    half03 = (_ket(4, 0) + _ket(4, 3)) / 2.0
    half12 = (_ket(4, 1) + _ket(4, 2)) / 2.0
    root = _branch_pair(np.concatenate([half03, half12]))

    s = 1.0 / np.sqrt(2.0)
    nodes: dict[str, tuple[np.ndarray, np.ndarray]] = {"": root}
    for prefix, pair_targets, source in (
        ("0", (3, 0), half03),
        ("1", (2, 1), half12),
    ):
        column = np.concatenate([s * _ket(4, pair_targets[0]), s * _ket(4, pair_targets[1])])
        tilde = _branch_pair(column)
        rot = complete_isometry((source * np.sqrt(2.0)).reshape(-1, 1))
        nodes[prefix] = (tilde[0] @ rot.conj().T, tilde[1] @ rot.conj().T)
    return tree_plan(4, nodes, epsilon=0.0)


def mms_prep_channel() -> KrausChannel:
    """Rank-4 channel recomposed from the preparation tree."""
    ch = recompose(mms_prep_plan())
    return channel(ch.ops, label="mms_prep")


def sic_povm_channel(dim: int = 4) -> KrausChannel:
    """Measure-and-collapse channel of the d² SIC-POVM outcomes: operator k
    projects onto frame vector k with weight matching its POVM element."""
    if dim not in (2, 3, 4):
        raise BadParameter(f"SIC-POVM channel requires dim in {{2, 3, 4}}, got {dim}")
    povm = build_sic(dim)
    ops = []
    for v in povm.vectors:
        unit = v / np.linalg.norm(v)
        ops.append(np.outer(unit, v.conj()) / np.sqrt(dim))
    return channel(ops, label=f"sic_povm_d{dim}")


def depolarize(p: float, dim: int = 4) -> KrausChannel:
    """Depolarizing channel ρ ↦ (1−p)ρ + p·I/d as a d²-operator Kraus set
    built from a complete orthogonal operator basis."""
    if not 0.0 <= p <= 1.0:
        raise BadParameter(f"depolarization probability must lie in [0, 1], got {p}")
    if dim not in (2, 3, 4):
        raise BadParameter(f"depolarize requires dim in {{2, 3, 4}}, got {dim}")
    basis = build_basis(dim)
    d2 = dim * dim
    ops = [np.sqrt(1.0 - p * (d2 - 1) / d2) * basis.ops[0]]
    ops.extend(np.sqrt(p) / dim * op for op in basis.ops[1:])
    return channel(ops, label=f"depolarize_{p:g}")


NAMED_CHANNELS = (
    "odd_parity_stab",
    "two_photon_dissipation",
    "sio2",
    "sio4",
    "mms_prep",
    "sic_povm_tree",
    "depolarize",
)


def named_channel(name: str, **params: float) -> KrausChannel:
    """Look up a channel by id; parameters: kt (two_photon_dissipation),
    p and dim (depolarize), dim (sic_povm_tree)."""
    if name == "odd_parity_stab":
        _no_params(name, params)
        return odd_parity_stabilizer()
    if name == "two_photon_dissipation":
        kt = float(_take(name, params, "kt"))
        _no_params(name, params)
        return two_photon_dissipation(kt)
    if name == "sio2":
        _no_params(name, params)
        return sio2_channel()
    if name == "sio4":
        _no_params(name, params)
        return sio4_channel()
    if name == "mms_prep":
        _no_params(name, params)
        return mms_prep_channel()
    if name == "sic_povm_tree":
        dim = int(_take(name, params, "dim", 4))
        _no_params(name, params)
        return sic_povm_channel(dim)
    if name == "depolarize":
        p = float(_take(name, params, "p"))
        dim = int(_take(name, params, "dim", 4))
        _no_params(name, params)
        return depolarize(p, dim)
    raise BadParameter(f"unknown channel id {name!r}; known: {', '.join(NAMED_CHANNELS)}")


def named_tree(name: str, epsilon: float = 1e-9, **params: float) -> TreePlan:
    """Tree plan for a tree-backed id: hand-built for sio4 and mms_prep,
    synthesized for sic_povm_tree."""
    if name == "sio4":
        _no_params(name, params)
        return sio4_plan()
    if name == "mms_prep":
        _no_params(name, params)
        return mms_prep_plan()
    if name == "sic_povm_tree":
        dim = int(_take(name, params, "dim", 4))
        _no_params(name, params)
        return synthesize(sic_povm_channel(dim), epsilon)
    raise BadParameter(f"channel id {name!r} is not tree-backed")


def _take(name: str, params: dict, key: str, default: float | None = None) -> float:
    if key in params:
        return params.pop(key)
    if default is None:
        raise BadParameter(f"{name} requires parameter {key!r}")
    return default


def _no_params(name: str, params: dict) -> None:
    if params:
        raise BadParameter(f"unknown parameters for {name}: {sorted(params)}")
