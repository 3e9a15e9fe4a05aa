"""Block decomposition of projector pairs, dilation, compression."""

import math

import numpy as np
import pytest

from unsharpjoint import (
    ANCILLA_CONVENTION,
    DichotomicObservable,
    DimensionMismatch,
    Effect,
    NotProjector,
    OddDimension,
    Projector,
    compress,
    neumark_dilate,
    projector_onto,
    two_projector_blocks,
)
from unsharpjoint.operators import PAULI_X, identity


def _random_projector(rng, dim, rank):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(g)
    cols = q[:, :rank]
    return Projector(cols @ cols.conj().T, rank=rank)


def _random_effect(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(g)
    eigs = rng.uniform(0, 1, size=dim)
    return Effect((q * eigs) @ q.conj().T)


class TestTwoProjectorBlocks:
    def test_identical_rank_one_projectors(self):
        p = projector_onto([1, 0])
        dec = two_projector_blocks(p, p)
        shapes = sorted((b.dim, b.rank_p, b.rank_q) for b in dec.blocks)
        assert shapes == [(1, 0, 0), (1, 1, 1)]
        overlaps = {(b.rank_p, b.rank_q): b.overlap for b in dec.blocks}
        assert overlaps[(1, 1)] == 1.0
        assert overlaps[(0, 0)] == 0.0

    def test_z_plus_pair(self):
        # |0> against |+>: a single 2-dim block with overlap 1/sqrt(2),
        # the inner product computed directly.
        p = projector_onto([1, 0])
        q = projector_onto([1, 1])
        dec = two_projector_blocks(p, q)
        assert len(dec.blocks) == 1
        blk = dec.blocks[0]
        assert (blk.dim, blk.rank_p, blk.rank_q) == (2, 1, 1)
        assert blk.overlap == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_random_pair_in_c8(self):
        rng = np.random.default_rng(61)
        p = _random_projector(rng, 8, 3)
        q = _random_projector(rng, 8, 4)
        dec = two_projector_blocks(p, q)
        for m in (p.matrix, q.matrix):
            assert dec.off_block_mass(m) <= 1e-9
            assert dec.reconstruction_residual(m) <= 1e-9
        assert all(b.dim <= 2 for b in dec.blocks)

    def test_rank_bookkeeping(self):
        rng = np.random.default_rng(67)
        for _ in range(15):
            d = int(rng.integers(2, 10))
            rp = int(rng.integers(1, d))
            rq = int(rng.integers(1, d))
            p = _random_projector(rng, d, rp)
            q = _random_projector(rng, d, rq)
            dec = two_projector_blocks(p, q)
            assert sum(b.rank_p for b in dec.blocks) == rp
            assert sum(b.rank_q for b in dec.blocks) == rq
            assert sum(b.dim for b in dec.blocks) == d

    def test_block_ordering(self):
        # Generic blocks come first in descending overlap, then aligned,
        # then the null blocks.
        rng = np.random.default_rng(71)
        p = _random_projector(rng, 10, 4)
        q = _random_projector(rng, 10, 5)
        dec = two_projector_blocks(p, q)
        phase = 0  # 0: generic, 1: aligned, 2: null
        last_overlap = 1.0
        for b in dec.blocks:
            if b.dim == 2:
                assert phase == 0
                assert b.overlap <= last_overlap + 1e-15
                last_overlap = b.overlap
            elif (b.rank_p, b.rank_q) == (1, 1):
                assert phase <= 1
                phase = 1
            else:
                phase = 2

    def test_every_block_species_at_once(self):
        # ran p = span{e0,e1,e2}, ran q = span{e0,(e1+e3)/sqrt2,e4}: one
        # aligned direction, one generic angle, and all three null kinds.
        d = 6
        e = np.eye(d, dtype=complex)
        p_cols = np.column_stack([e[:, 0], e[:, 1], e[:, 2]])
        mixed = (e[:, 1] + e[:, 3]) / math.sqrt(2)
        q_cols = np.column_stack([e[:, 0], mixed, e[:, 4]])
        p = Projector(p_cols @ p_cols.conj().T, rank=3)
        q = Projector(q_cols @ q_cols.conj().T, rank=3)
        dec = two_projector_blocks(p, q)
        kinds = sorted(
            (b.dim, b.rank_p, b.rank_q, round(b.overlap, 6)) for b in dec.blocks
        )
        assert kinds == sorted(
            [
                (2, 1, 1, 0.707107),
                (1, 1, 1, 1.0),
                (1, 1, 0, 0.0),
                (1, 0, 1, 0.0),
                (1, 0, 0, 0.0),
            ]
        )
        for m in (p.matrix, q.matrix):
            assert dec.off_block_mass(m) <= 1e-12

    def test_commuting_projectors_give_1d_blocks(self):
        p = Projector.from_matrix(np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex))
        q = Projector.from_matrix(np.diag([1.0, 0.0, 1.0, 0.0]).astype(complex))
        dec = two_projector_blocks(p, q)
        assert all(b.dim == 1 for b in dec.blocks)
        kinds = sorted((b.rank_p, b.rank_q) for b in dec.blocks)
        assert kinds == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_rejects_non_projector(self):
        p = projector_onto([1, 0])
        bad = Projector.__new__(Projector)
        object.__setattr__(bad, "matrix", np.diag([0.6, 0.4]).astype(complex))
        object.__setattr__(bad, "rank", 1)
        with pytest.raises(NotProjector):
            two_projector_blocks(p, bad)

    def test_rejects_dimension_mismatch(self):
        p = projector_onto([1, 0])
        q = projector_onto([1, 0, 0])
        with pytest.raises(DimensionMismatch):
            two_projector_blocks(p, q)

    def test_unitary_is_unitary(self):
        rng = np.random.default_rng(73)
        p = _random_projector(rng, 6, 2)
        q = _random_projector(rng, 6, 3)
        dec = two_projector_blocks(p, q)
        u = dec.unitary
        assert np.max(np.abs(u.conj().T @ u - identity(6))) <= 1e-10


class TestNeumarkDilate:
    def test_sharp_effect_dilates_cleanly(self):
        obs = DichotomicObservable.from_yes_effect(np.diag([1.0, 0.0]).astype(complex))
        dil = neumark_dilate(obs)
        assert dil.convention == ANCILLA_CONVENTION
        back = compress(dil.projector.as_effect(), 0)
        np.testing.assert_allclose(back.matrix, obs.yes_effect.matrix, atol=1e-15)

    def test_half_identity_closed_form(self):
        # A = I/2 dilates to I_2 tensor |+><+| (basis independent), a
        # rank-2 projector whose ancilla-0 sector is I/2.
        obs = DichotomicObservable.from_yes_effect(0.5 * identity(2))
        dil = neumark_dilate(obs)
        assert dil.projector.rank == 2
        expected = np.kron(identity(2), np.full((2, 2), 0.5))
        np.testing.assert_allclose(dil.projector.matrix, expected, atol=1e-12)
        back = compress(dil.projector.as_effect(), 0)
        np.testing.assert_allclose(back.matrix, 0.5 * identity(2), atol=1e-12)

    def test_roundtrip_random_qubit_effects(self):
        rng = np.random.default_rng(79)
        for _ in range(100):
            e = _random_effect(rng, 2)
            dil = neumark_dilate(DichotomicObservable.from_yes_effect(e))
            back = compress(dil.projector.as_effect(), 0)
            assert np.max(np.abs(back.matrix - e.matrix)) <= 1e-12

    @pytest.mark.parametrize("dim", [2, 3, 4, 8])
    def test_roundtrip_dimensions(self, dim):
        rng = np.random.default_rng(83 + dim)
        for _ in range(10):
            e = _random_effect(rng, dim)
            dil = neumark_dilate(DichotomicObservable.from_yes_effect(e))
            back = compress(dil.projector.as_effect(), 0)
            assert np.max(np.abs(back.matrix - e.matrix)) <= 1e-12

    def test_accepts_bare_effect(self):
        e = Effect(np.diag([0.25, 0.75]).astype(complex))
        dil = neumark_dilate(e)
        back = compress(dil.projector.as_effect(), 0)
        np.testing.assert_allclose(back.matrix, e.matrix, atol=1e-12)


class TestCompress:
    def test_identity_compresses_to_identity(self):
        e = compress(Effect(identity(4)), 0)
        np.testing.assert_array_equal(e.matrix, identity(2))

    def test_orthogonal_ancilla_sector_vanishes(self):
        g = np.kron(0.5 * (identity(2) + PAULI_X), np.diag([0.0, 1.0]))
        e = compress(Effect(g), 0)
        np.testing.assert_array_equal(e.matrix, np.zeros((2, 2)))

    def test_other_sector(self):
        g = np.kron(0.5 * (identity(2) + PAULI_X), np.diag([0.0, 1.0]))
        e = compress(Effect(g), 1)
        np.testing.assert_allclose(e.matrix, 0.5 * (identity(2) + PAULI_X), atol=1e-15)

    def test_odd_dimension_rejected(self):
        with pytest.raises(OddDimension):
            compress(Effect(identity(3)), 0)

    def test_effects_map_to_effects(self):
        rng = np.random.default_rng(89)
        for _ in range(30):
            d = 2 * int(rng.integers(1, 5))
            e = _random_effect(rng, d)
            out = compress(e, 0)  # Effect validation runs inside
            assert out.dim == d // 2
