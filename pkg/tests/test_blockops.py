import numpy as np
import pytest

from conftest import cgauss, rand_herm, rand_psd
from oracles import block_trace_pairing_1, block_trace_pairing_2
from partrace.blockops import (
    BlockMatrix,
    assemble,
    block_at,
    embed_left,
    embed_right,
    partial_trace_1,
    partial_trace_2,
    partial_transpose,
)
from partrace.cones import is_psd
from partrace.errors import DimensionError
from partrace.matkernel import fro_norm, frobenius_inner

DIMS = [(1, 1), (1, 3), (3, 1), (2, 2), (2, 3), (3, 2), (4, 2)]


def rand_block(rng, m, n, psd=False):
    d = m * n
    return BlockMatrix(m, n, rand_psd(rng, d) if psd else cgauss(rng, (d, d)))


def test_constructor_validates():
    with pytest.raises(DimensionError):
        BlockMatrix(2, 2, np.eye(3))
    with pytest.raises(DimensionError):
        BlockMatrix(0, 2, np.eye(0))


def test_data_is_read_only(astar):
    with pytest.raises(ValueError):
        astar.data[0, 0] = 5


class TestAssemble:
    def test_identity(self):
        z, i = np.zeros((2, 2)), np.eye(2)
        np.testing.assert_array_equal(assemble([[i, z], [z, i]]).data, np.eye(4))

    def test_fixture(self, astar):
        z = np.zeros((2, 2))
        out = assemble([[np.diag([1, 2]), z], [z, np.diag([3, 4])]])
        np.testing.assert_array_equal(out.data, astar.data)
        assert (out.m, out.n) == (2, 2)

    def test_roundtrip(self, rng):
        a = rand_block(rng, 3, 2)
        grid = [[block_at(a, i, j) for j in range(3)] for i in range(3)]
        np.testing.assert_array_equal(assemble(grid).data, a.data)

    def test_ragged(self):
        with pytest.raises(DimensionError):
            assemble([[np.eye(2), np.eye(2)], [np.eye(2)]])
        with pytest.raises(DimensionError):
            assemble([[np.eye(2), np.eye(3)], [np.eye(2), np.eye(2)]])


class TestBlockAt:
    def test_identity(self):
        np.testing.assert_array_equal(block_at(BlockMatrix(2, 2, np.eye(4)), 0, 0), np.eye(2))

    def test_fixture(self, astar):
        np.testing.assert_array_equal(block_at(astar, 1, 1), np.diag([3, 4]))
        np.testing.assert_array_equal(block_at(astar, 0, 1), np.zeros((2, 2)))

    def test_out_of_range(self, astar):
        with pytest.raises(IndexError):
            block_at(astar, 2, 0)
        with pytest.raises(IndexError):
            block_at(astar, 0, -1)


class TestPartialTraces:
    def test_identity(self):
        a = BlockMatrix(2, 2, np.eye(4))
        np.testing.assert_array_equal(partial_trace_1(a), 2 * np.eye(2))
        np.testing.assert_array_equal(partial_trace_2(a), 2 * np.eye(2))

    def test_fixture(self, astar):
        np.testing.assert_array_equal(partial_trace_1(astar), np.diag([4, 6]))
        np.testing.assert_array_equal(partial_trace_2(astar), np.diag([3, 7]))

    @pytest.mark.parametrize("m,n", DIMS)
    def test_pairing_tr1(self, rng, m, n):
        for _ in range(200 // len(DIMS)):
            a = rand_block(rng, m, n, psd=True)
            x = rand_herm(rng, n)
            lhs = frobenius_inner(embed_left(x, m).data, a.data)
            assert abs(lhs - frobenius_inner(x, partial_trace_1(a))) <= 1e-10 * fro_norm(a.data) * fro_norm(x)
            assert abs(lhs - block_trace_pairing_1(a.data, x, m, n)) <= 1e-10 * fro_norm(a.data) * fro_norm(x)

    @pytest.mark.parametrize("m,n", DIMS)
    def test_pairing_tr2(self, rng, m, n):
        for _ in range(200 // len(DIMS)):
            a = rand_block(rng, m, n, psd=True)
            y = rand_herm(rng, m)
            lhs = frobenius_inner(embed_right(y, n).data, a.data)
            assert abs(lhs - frobenius_inner(y, partial_trace_2(a))) <= 1e-10 * fro_norm(a.data) * fro_norm(y)
            assert abs(lhs - block_trace_pairing_2(a.data, y, m, n)) <= 1e-10 * fro_norm(a.data) * fro_norm(y)

    @pytest.mark.parametrize("m,n", DIMS)
    def test_full_trace_preserved(self, rng, m, n):
        a = rand_block(rng, m, n)
        t = np.trace(a.data)
        assert abs(np.trace(partial_trace_1(a)) - t) <= 1e-10 * abs(t)
        assert abs(np.trace(partial_trace_2(a)) - t) <= 1e-10 * abs(t)

    @pytest.mark.parametrize("m,n", DIMS)
    def test_psd_preserved(self, rng, m, n):
        a = rand_block(rng, m, n, psd=True)
        assert is_psd(partial_trace_1(a))
        assert is_psd(partial_trace_2(a))

    def test_linearity(self, rng):
        a, b = rand_block(rng, 3, 2), rand_block(rng, 3, 2)
        alpha, beta = 0.7 - 0.2j, -1.3
        mix = BlockMatrix(3, 2, alpha * a.data + beta * b.data)
        for tr in (partial_trace_1, partial_trace_2):
            expect = alpha * tr(a) + beta * tr(b)
            assert fro_norm(tr(mix) - expect) <= 1e-12 * max(1.0, fro_norm(expect))

    def test_degenerate_dims(self, rng):
        a = rand_block(rng, 1, 3)
        np.testing.assert_array_equal(partial_trace_1(a), a.data)
        assert partial_trace_2(a)[0, 0] == pytest.approx(np.trace(a.data))
        b = rand_block(rng, 3, 1)
        np.testing.assert_array_equal(partial_trace_2(b), b.data)
        assert partial_trace_1(b)[0, 0] == pytest.approx(np.trace(b.data))


class TestPartialTranspose:
    def test_identity(self):
        np.testing.assert_array_equal(partial_transpose(BlockMatrix(2, 2, np.eye(4))).data, np.eye(4))

    def test_fixture_fixed_point(self, astar):
        np.testing.assert_array_equal(partial_transpose(astar).data, astar.data)

    @pytest.mark.parametrize("m,n", DIMS)
    def test_involution(self, rng, m, n):
        a = rand_block(rng, m, n)
        np.testing.assert_array_equal(partial_transpose(partial_transpose(a)).data, a.data)

    def test_blocks_move_but_are_not_transposed(self, rng):
        a = rand_block(rng, 3, 2)
        t = partial_transpose(a)
        for i in range(3):
            for j in range(3):
                np.testing.assert_array_equal(block_at(t, i, j), block_at(a, j, i))

    def test_tr1_unchanged(self, rng):
        # Diagonal blocks stay in place, so tr1 is untouched.
        a = rand_block(rng, 3, 2)
        np.testing.assert_array_equal(partial_trace_1(partial_transpose(a)), partial_trace_1(a))

    def test_tr2_transposes(self, rng):
        a = rand_block(rng, 3, 2)
        assert np.abs(partial_trace_2(partial_transpose(a)) - partial_trace_2(a).T).max() <= 1e-12


class TestEmbeddings:
    def test_left_identity(self):
        np.testing.assert_array_equal(embed_left(np.eye(2), 2).data, np.eye(4))

    def test_left_diagonal(self):
        np.testing.assert_array_equal(embed_left(np.diag([4, 6]), 2).data, np.diag([4, 6, 4, 6]))

    def test_right_identity(self):
        np.testing.assert_array_equal(embed_right(np.eye(2), 2).data, np.eye(4))

    def test_right_diagonal(self):
        np.testing.assert_array_equal(embed_right(np.diag([3, 7]), 2).data, np.diag([3, 3, 7, 7]))

    def test_traces_of_embeddings(self, rng):
        x, y = cgauss(rng, (2, 2)), cgauss(rng, (3, 3))
        np.testing.assert_allclose(partial_trace_1(embed_left(x, 3)), 3 * x, atol=1e-14)
        np.testing.assert_allclose(partial_trace_2(embed_right(y, 2)), 2 * y, atol=1e-14)

    def test_block_tags(self, rng):
        e = embed_left(cgauss(rng, (3, 3)), 2)
        assert (e.m, e.n) == (2, 3)
        e = embed_right(cgauss(rng, (3, 3)), 2)
        assert (e.m, e.n) == (3, 2)
