"""Named channel/tree library behavior."""

from __future__ import annotations

import numpy as np
import pytest

from kraustree.channels import apply, check_completeness, choi_distance
from kraustree.errors import BadParameter
from kraustree.library import (
    depolarize,
    mms_prep_channel,
    mms_prep_plan,
    named_channel,
    named_tree,
    odd_parity_stabilizer,
    sic_povm_channel,
    sio2_channel,
    sio4_channel,
    sio4_plan,
    two_photon_dissipation,
)
from kraustree.sic import build_sic
from kraustree.tree import recompose, synthesize

from helpers import random_density


def ket(dim: int, k: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    return v


class TestOddParityStabilizer:
    def test_exact_matrices(self):
        ch = odd_parity_stabilizer()
        e0 = np.outer(ket(4, 1), ket(4, 1)) + np.outer(ket(4, 3), ket(4, 3))
        e1 = np.outer(ket(4, 1), ket(4, 0)) + np.outer(ket(4, 3), ket(4, 2))
        assert np.array_equal(ch.ops[0], e0)
        assert np.array_equal(ch.ops[1], e1)
        assert ch.strict

    def test_single_application_fills_odd_subspace(self):
        ch = odd_parity_stabilizer()
        rho = apply(ch, random_density(np.random.default_rng(0), 4))
        odd = rho[1, 1].real + rho[3, 3].real
        assert odd == pytest.approx(1.0, abs=1e-12)


class TestTwoPhotonDissipation:
    def test_zero_time_is_identity_with_zero_jump(self):
        ch = two_photon_dissipation(0.0)
        assert ch.strict
        assert np.array_equal(ch.ops[0], np.eye(4, dtype=complex))
        assert np.max(np.abs(ch.ops[1])) == 0.0

    def test_matrix_entries(self):
        kt = 0.37
        ch = two_photon_dissipation(kt)
        assert np.allclose(
            np.diag(ch.ops[0]), [1.0, 1.0, np.exp(-kt), np.exp(-3 * kt)]
        )
        assert ch.ops[1][0, 2] == pytest.approx(np.sqrt(1 - np.exp(-2 * kt)))
        assert ch.ops[1][1, 3] == pytest.approx(np.sqrt(1 - np.exp(-6 * kt)))
        assert check_completeness(ch) < 1e-12

    def test_long_time_moves_pairs_down(self):
        ch = two_photon_dissipation(20.0)
        out2 = apply(ch, np.outer(ket(4, 2), ket(4, 2)))
        out3 = apply(ch, np.outer(ket(4, 3), ket(4, 3)))
        assert out2[0, 0].real == pytest.approx(1.0, abs=1e-12)
        assert out3[1, 1].real == pytest.approx(1.0, abs=1e-12)

    def test_negative_time_rejected(self):
        with pytest.raises(BadParameter):
            two_photon_dissipation(-0.1)


class TestSubspaceProjections:
    def test_sio2_matrices(self):
        ch = sio2_channel()
        assert np.array_equal(ch.ops[0], np.diag([1, 1, 0, 0]).astype(complex))
        assert np.array_equal(ch.ops[1], np.diag([0, 0, 1, 1]).astype(complex))

    def test_sio2_kills_cross_block_coherence(self):
        psi = np.ones(4) / 2.0
        out = apply(sio2_channel(), np.outer(psi, psi.conj()))
        assert abs(out[0, 2]) < 1e-15 and abs(out[1, 3]) < 1e-15
        assert abs(out[0, 1] - 0.25) < 1e-12

    def test_sio4_dephases_completely(self):
        rho = random_density(np.random.default_rng(5), 4)
        out = apply(sio4_channel(), rho)
        assert np.allclose(out, np.diag(np.diag(rho)))

    def test_sio4_plan_recomposes_to_projectors(self):
        ch = recompose(sio4_plan())
        want = sio4_channel()
        for got, exp in zip(ch.ops, want.ops):
            assert np.max(np.abs(got - exp)) < 1e-10

    def test_sio4_plan_matches_synthesis(self):
        hand = sio4_plan()
        auto = synthesize(sio4_channel(), 1e-12)
        for prefix, pair in hand.nodes.items():
            for b in (0, 1):
                assert np.max(np.abs(pair[b] - auto.nodes[prefix][b])) < 1e-10


class TestMmsPrep:
    def test_ground_state_maps_to_maximally_mixed(self):
        rho0 = np.outer(ket(4, 0), ket(4, 0))
        out = apply(mms_prep_channel(), rho0)
        assert np.max(np.abs(out - np.eye(4) / 4.0)) < 1e-12

    def test_plan_shape(self):
        plan = mms_prep_plan()
        assert plan.layers == 2
        assert set(plan.nodes) == {"", "0", "1"}

    def test_each_node_is_strictly_complete(self):
        for pair in mms_prep_plan().nodes.values():
            gram = pair[0].conj().T @ pair[0] + pair[1].conj().T @ pair[1]
            assert np.max(np.abs(gram - np.eye(4))) < 1e-12

    def test_channel_is_trace_preserving(self):
        assert check_completeness(mms_prep_channel()) < 1e-12


class TestSicPovmChannel:
    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_gram_ops_reproduce_povm_elements(self, dim):
        ch = sic_povm_channel(dim)
        povm = build_sic(dim)
        assert ch.rank == dim * dim
        for op, element in zip(ch.ops, povm.elements):
            assert np.max(np.abs(op.conj().T @ op - element)) < 1e-12

    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_outcome_states_are_frame_states(self, dim):
        ch = sic_povm_channel(dim)
        povm = build_sic(dim)
        for op, v in zip(ch.ops, povm.vectors):
            unit = v / np.linalg.norm(v)
            post = op @ unit
            post /= np.linalg.norm(post)
            assert abs(abs(np.vdot(post, unit)) - 1.0) < 1e-12

    def test_tree_round_trip(self):
        ch = sic_povm_channel(4)
        plan = named_tree("sic_povm_tree", dim=4)
        assert plan.layers == 4
        assert choi_distance(recompose(plan), ch) < 1e-6

    def test_bad_dimension(self):
        with pytest.raises(BadParameter):
            sic_povm_channel(5)


class TestDepolarize:
    def test_ground_state_example(self):
        out = apply(depolarize(0.036), np.outer(ket(4, 0), ket(4, 0)))
        assert np.allclose(np.diag(out).real, [1 - 0.036 * 3 / 4, 0.009, 0.009, 0.009])
        assert np.max(np.abs(out - np.diag(np.diag(out)))) < 1e-15

    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_matches_analytic_map(self, dim):
        rng = np.random.default_rng(11 + dim)
        rho = random_density(rng, dim)
        p = 0.3
        got = apply(depolarize(p, dim), rho)
        want = (1 - p) * rho + p * np.eye(dim) / dim
        assert np.max(np.abs(got - want)) < 1e-12

    def test_zero_strength_is_identity_map(self):
        rho = random_density(np.random.default_rng(2), 4)
        assert np.max(np.abs(apply(depolarize(0.0), rho) - rho)) < 1e-12

    def test_full_strength_erases_input(self):
        rho = random_density(np.random.default_rng(3), 4)
        assert np.max(np.abs(apply(depolarize(1.0), rho) - np.eye(4) / 4)) < 1e-12

    @pytest.mark.parametrize("p", [-0.01, 1.01])
    def test_out_of_range_rejected(self, p):
        with pytest.raises(BadParameter):
            depolarize(p)


class TestNamedLookup:
    @pytest.mark.parametrize(
        "name, params",
        [
            ("odd_parity_stab", {}),
            ("two_photon_dissipation", {"kt": 0.5}),
            ("sio2", {}),
            ("sio4", {}),
            ("mms_prep", {}),
            ("sic_povm_tree", {"dim": 2}),
            ("depolarize", {"p": 0.1}),
        ],
    )
    def test_dispatch(self, name, params):
        ch = named_channel(name, **params)
        assert ch.dim in (2, 3, 4)
        assert check_completeness(ch) < 1e-8

    def test_unknown_id(self):
        with pytest.raises(BadParameter):
            named_channel("nope")

    def test_missing_parameter(self):
        with pytest.raises(BadParameter):
            named_channel("two_photon_dissipation")

    def test_unknown_parameter(self):
        with pytest.raises(BadParameter):
            named_channel("sio2", p=0.1)

    def test_named_tree_requires_tree_backed_id(self):
        with pytest.raises(BadParameter):
            named_tree("odd_parity_stab")

    @pytest.mark.parametrize("name", ["sio4", "mms_prep"])
    def test_named_tree_recomposes_to_named_channel(self, name):
        plan = named_tree(name)
        assert choi_distance(recompose(plan), named_channel(name)) < 1e-10
