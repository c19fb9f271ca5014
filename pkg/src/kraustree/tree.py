"""Decompose an arbitrary rank-m channel into an adaptive binary tree of
rank-2 operations, recompose trees back into channels, and dilate tree
nodes to ancilla unitaries.

A tree plan with n layers stores one rank-2 Kraus pair per binary outcome
prefix of length < n.  Leaf index k corresponds to the outcome path of k
written MSB-first, and the recomposed Kraus operator is the path product
with the deepest node applied last.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import KrausChannel, channel
from .dilation import AncillaUnitary, dilate_partial, dilate_rank2
from .errors import (
    DimensionMismatch,
    IncompleteChannel,
    InvalidProtocol,
    NotProjector,
    RankOverflow,
)
from .linalg import (
    check_square,
    eig_hermitian,
    hermitianize,
    matrix_from_json,
    matrix_to_json,
    reg_inverse,
    spectral_norm,
    sqrt_psd,
)

RANK_SVD_ATOL = 1e-8
NODE_SUM_ATOL = 1e-6
RECOMPOSE_ATOL = 1e-6


@dataclass(frozen=True)
class TreePlan:
    """Full binary tree of rank-2 Kraus pairs keyed by outcome prefix."""

    dim: int
    layers: int
    nodes: dict[str, tuple[np.ndarray, np.ndarray]]
    epsilon: float


def _prefixes(layers: int):
    for length in range(layers):
        for idx in range(2**length):
            yield format(idx, f"0{length}b") if length else ""


def ancestor_products(plan: TreePlan) -> dict[str, np.ndarray]:
    """Accumulated node-operator product for every prefix, root product = I."""
    products = {"": np.eye(plan.dim, dtype=complex)}
    for prefix in _prefixes(plan.layers):
        op0, op1 = plan.nodes[prefix]
        products[prefix + "0"] = op0 @ products[prefix]
        products[prefix + "1"] = op1 @ products[prefix]
    return products


def reachable_projector(product: np.ndarray) -> np.ndarray:
    """Projector onto the column space of an ancestor product.

    Singular values below 1e-8 are treated as zero.
    """
    u, s, _ = np.linalg.svd(product)
    cols = u[:, s > RANK_SVD_ATOL]
    return cols @ cols.conj().T


def tree_plan(
    dim: int,
    nodes: dict[str, tuple[np.ndarray, np.ndarray]],
    epsilon: float = 0.0,
) -> TreePlan:
    """Validated plan constructor.

    Structural checks: the prefix set must form a full binary tree and every
    operator must be dim×dim.  Numerically, each node's pair sum
    op0†op0 + op1†op1 must act as the identity on the subspace reachable
    through its ancestors (within 1e-6) — strict pairs summing to I on the
    whole space are accepted at partially reachable nodes.
    """
    if "" not in nodes:
        raise InvalidProtocol("plan must contain a root node (empty prefix)")
    layers = max(len(prefix) for prefix in nodes) + 1
    expected = set(_prefixes(layers))
    if set(nodes) != expected:
        raise InvalidProtocol(
            f"node prefixes do not form a full {layers}-layer binary tree"
        )
    clean: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for prefix, pair in nodes.items():
        op0, op1 = (check_square(op) for op in pair)
        if op0.shape[0] != dim or op1.shape[0] != dim:
            raise DimensionMismatch(f"node '{prefix}' operators are not {dim}×{dim}")
        clean[prefix] = (op0, op1)
    plan = TreePlan(dim, layers, clean, float(epsilon))
    products = ancestor_products(plan)
    for prefix in _prefixes(layers):
        op0, op1 = plan.nodes[prefix]
        pair_sum = op0.conj().T @ op0 + op1.conj().T @ op1
        proj = reachable_projector(products[prefix])
        defect = spectral_norm(proj @ (pair_sum - np.eye(dim)) @ proj)
        if defect > NODE_SUM_ATOL:
            raise InvalidProtocol(
                f"node '{prefix}' pair is not complete on its reachable "
                f"subspace (defect {defect:.3e})"
            )
    return plan


def synthesize(ch: KrausChannel, epsilon: float = 1e-9) -> TreePlan:
    """Build the binary-tree decomposition of a channel.

    The operator list is zero-padded to the next power of two.  A branch
    operator is the PSD square root of the partial sum of E†E over its leaf
    set, multiplied on the right by the regularized inverse of the ancestor
    product (the root layer has an empty ancestor product and takes the
    square root directly); the leaf layer uses the raw Kraus operators.
    The regularization constant is epsilon scaled by the spectral norm of
    the matrix being inverted.
    """
    if not ch.strict:
        raise IncompleteChannel("synthesis requires a complete channel")
    d = ch.dim
    if ch.rank > d * d:
        raise RankOverflow(f"rank {ch.rank} exceeds d² = {d * d}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    layers = max(1, math.ceil(math.log2(ch.rank))) if ch.rank > 1 else 1
    leaves = 2**layers
    ops = list(ch.ops) + [
        np.zeros((d, d), dtype=complex) for _ in range(leaves - ch.rank)
    ]
    grams = [op.conj().T @ op for op in ops]
    nodes: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    products = {"": np.eye(d, dtype=complex)}
    for prefix in _prefixes(layers):
        depth = len(prefix)
        pair = []
        for bit in "01":
            branch = prefix + bit
            if depth == layers - 1:
                base = ops[int(branch, 2)]
            else:
                span = leaves >> len(branch)
                start = int(branch, 2) * span
                total = np.zeros((d, d), dtype=complex)
                for k in range(start, start + span):
                    total = total + grams[k]
                base = sqrt_psd(hermitianize(total))
            if depth == 0:
                node_op = base
            else:
                scale = spectral_norm(products[prefix])
                eps_eff = epsilon * (scale if scale > 0 else 1.0)
                node_op = base @ reg_inverse(products[prefix], eps_eff)
            pair.append(node_op)
            products[branch] = node_op @ products[prefix]
        nodes[prefix] = (pair[0], pair[1])
    return tree_plan(d, nodes, epsilon)


def recompose(plan: TreePlan) -> KrausChannel:
    """Collapse a plan back into a channel of 2ⁿ path-product operators."""
    products = ancestor_products(plan)
    leaves = 2**plan.layers
    ops = [products[format(k, f"0{plan.layers}b")] for k in range(leaves)]
    return channel(ops, label="recomposed", strict=True, atol=RECOMPOSE_ATOL)


def plan_to_unitaries(plan: TreePlan) -> dict[str, AncillaUnitary]:
    """Dilate every node to an ancilla unitary.

    A node whose pair is complete on the whole space goes through the
    rank-2 dilation; otherwise the pair is dilated on the reachable
    subspace of its ancestor product.
    """
    d = plan.dim
    products = ancestor_products(plan)
    out: dict[str, AncillaUnitary] = {}
    for prefix in _prefixes(plan.layers):
        op0, op1 = plan.nodes[prefix]
        pair_sum = op0.conj().T @ op0 + op1.conj().T @ op1
        if spectral_norm(pair_sum - np.eye(d)) <= NODE_SUM_ATOL:
            stacked = _snap_isometry(np.vstack([op0, op1]))
            out[prefix] = dilate_rank2(stacked[:d], stacked[d:])
        else:
            u, s, _ = np.linalg.svd(products[prefix])
            basis = u[:, s > RANK_SVD_ATOL]
            proj = basis @ basis.conj().T
            stacked = _snap_isometry(np.vstack([op0 @ basis, op1 @ basis]))
            out[prefix] = dilate_partial(
                stacked[:d] @ basis.conj().T,
                stacked[d:] @ basis.conj().T,
                proj,
            )
    return out


def _snap_isometry(stacked: np.ndarray) -> np.ndarray:
    """Polar-correct nearly orthonormal columns to an exact isometry."""
    k = stacked.shape[1]
    if k == 0:
        return stacked
    gram = hermitianize(stacked.conj().T @ stacked)
    if spectral_norm(gram - np.eye(k)) <= 1e-12:
        return stacked
    w, v = np.linalg.eigh(gram)
    return stacked @ (v * (1.0 / np.sqrt(w))) @ v.conj().T


def dark_states(ch: KrausChannel, target_subspace) -> list[np.ndarray]:
    """Orthonormal states outside the target fixed by every Kraus operator.

    A state |ψ⟩ is dark when E_j|ψ⟩ ∝ |ψ⟩ for all j (proportionality
    includes the factor 0).  An empty list certifies that repeated
    application of the channel cannot trap population outside the target.
    Completeness of the channel is not required.
    """
    target = check_square(target_subspace)
    d = target.shape[0]
    if ch.dim != d:
        raise DimensionMismatch("target projector dimension does not match channel")
    if (
        spectral_norm(target - target.conj().T) > 1e-8
        or spectral_norm(target @ target - target) > 1e-8
    ):
        raise NotProjector("target subspace must be an orthogonal projector")
    values, vectors = eig_hermitian(np.eye(d) - target)
    complement = vectors[:, values > 0.5]
    if complement.shape[1] == 0:
        return []
    subspaces = [complement]
    for e in ch.ops:
        refined = []
        for basis in subspaces:
            refined.extend(_proportional_subspaces(e, basis))
        subspaces = refined
        if not subspaces:
            return []
    stacked = np.column_stack([b for basis in subspaces for b in basis.T])
    q, r = np.linalg.qr(stacked)
    keep = np.abs(np.diag(r)) > 1e-10
    return [q[:, i] for i in range(q.shape[1]) if keep[i]]


def _proportional_subspaces(e: np.ndarray, basis: np.ndarray) -> list[np.ndarray]:
    """Subspaces of span(basis) on which e acts as a scalar."""
    width = basis.shape[1]
    restricted = basis.conj().T @ e @ basis
    eigenvalues = np.linalg.eigvals(restricted)
    clusters: list[complex] = []
    for lam in sorted(eigenvalues, key=lambda z: (z.real, z.imag)):
        if not clusters or abs(lam - clusters[-1]) > 1e-8:
            clusters.append(lam)
    out = []
    for lam in clusters:
        shifted = (e - lam * np.eye(e.shape[0])) @ basis
        _, s, vh = np.linalg.svd(shifted)
        null_dim = int(np.sum(s <= RANK_SVD_ATOL * max(1.0, s[0])))
        if null_dim == 0:
            continue
        out.append(basis @ vh[width - null_dim :, :].conj().T)
    return out


def plan_to_json(plan: TreePlan) -> dict:
    """Serialize a plan as {dim, layers, epsilon, nodes: {prefix: [m0, m1]}}."""
    return {
        "dim": int(plan.dim),
        "layers": int(plan.layers),
        "epsilon": float(plan.epsilon),
        "nodes": {
            prefix: [matrix_to_json(pair[0]), matrix_to_json(pair[1])]
            for prefix, pair in plan.nodes.items()
        },
    }


def plan_from_json(obj: dict) -> TreePlan:
    """Deserialize and validate a plan produced by plan_to_json."""
    nodes = {
        str(prefix): (matrix_from_json(pair[0]), matrix_from_json(pair[1]))
        for prefix, pair in obj["nodes"].items()
    }
    return tree_plan(int(obj["dim"]), nodes, float(obj.get("epsilon", 0.0)))
