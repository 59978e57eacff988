import math

import numpy as np
import pytest

from conftest import cgauss, rand_herm, rand_psd
from partrace import generators as gen
from partrace.blockops import BlockMatrix, embed_right, partial_trace_2
from partrace.cones import (
    SectorParams,
    cartesian_parts,
    is_ppt,
    is_psd,
    loewner_ge,
    sector_margin,
    sector_margin_grid,
    support_function,
)
from partrace.errors import DimensionError, DomainError
from partrace.matkernel import fro_norm


def test_sector_params():
    p = SectorParams(math.pi / 4)
    assert p.tan_alpha == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(DomainError):
        SectorParams(math.pi / 2)
    with pytest.raises(DomainError):
        SectorParams(-0.1)


class TestCartesian:
    def test_hermitian(self, rng):
        h = rand_herm(rng, 3)
        re, im = cartesian_parts(h)
        np.testing.assert_allclose(re, h, atol=1e-15)
        np.testing.assert_allclose(im, 0, atol=1e-15)

    def test_imaginary_identity(self):
        re, im = cartesian_parts(1j * np.eye(2))
        np.testing.assert_allclose(re, 0, atol=1e-15)
        np.testing.assert_allclose(im, np.eye(2), atol=1e-15)

    def test_diag_family(self):
        t = 0.8
        re, im = cartesian_parts(np.diag([1 + 1j * t, 1 - 1j * t]))
        np.testing.assert_allclose(re, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(im, np.diag([t, -t]), atol=1e-15)

    def test_reconstruction(self, rng):
        a = cgauss(rng, (4, 4))
        re, im = cartesian_parts(a)
        assert fro_norm(re - re.conj().T) == 0
        assert fro_norm(im - im.conj().T) <= 1e-15
        assert fro_norm(re + 1j * im - a) <= 1e-14 * fro_norm(a)

    def test_nonsquare(self):
        with pytest.raises(DimensionError):
            cartesian_parts(np.ones((2, 3)))


class TestIsPsd:
    def test_identity(self):
        v = is_psd(np.eye(3))
        assert v.is_psd and v.lambda_min == pytest.approx(1.0)

    def test_indefinite(self):
        assert not is_psd(np.diag([1.0, -1.0]))

    def test_gram(self, rng):
        for k in range(500):
            d = 1 + k % 6
            rank = None if k % 2 else max(1, d - 2)
            v = is_psd(rand_psd(rng, d, rank))
            assert v.is_psd
            assert v.lambda_min >= -v.tolerance_used

    def test_tolerance_recorded(self):
        v = is_psd(np.diag([100.0, 0.0]), tol_scale=1e-10)
        assert v.tolerance_used == pytest.approx(1e-8)

    def test_non_hermitian(self):
        with pytest.raises(DomainError):
            is_psd(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_cone_closure(self, rng):
        for _ in range(100):
            assert is_psd(rand_psd(rng, 4, 2) + rand_psd(rng, 4, 1))

    def test_congruence(self, rng):
        for _ in range(100):
            a = rand_psd(rng, 4, 2)
            mm = cgauss(rng, (4, 4))
            assert is_psd(mm.conj().T @ a @ mm)


class TestLoewner:
    def test_scalar(self):
        assert loewner_ge(2 * np.eye(2), np.eye(2))
        assert not loewner_ge(np.eye(2), np.diag([2.0, 0.0]))

    def test_fixture_trace_bound(self, astar):
        big = 10 * np.eye(4)
        small = embed_right(partial_trace_2(astar), 2).data
        np.testing.assert_array_equal(small, np.diag([3, 3, 7, 7]))
        assert loewner_ge(big, small)

    def test_tolerance_scale(self):
        v = loewner_ge(100 * np.eye(2), 100 * np.eye(2), tol_scale=1e-10)
        assert v.tolerance_used == pytest.approx(1e-10 * 100 * math.sqrt(2))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            loewner_ge(np.eye(2), np.eye(3))


class TestPpt:
    def test_identity(self):
        assert all(is_ppt(BlockMatrix(2, 2, np.eye(4))))

    def test_fixture(self, astar):
        assert all(is_ppt(astar))

    @pytest.mark.parametrize("m,n", [(2, 2), (3, 2)])
    def test_separable(self, m, n):
        for seed in range(200):
            a = gen.rand_ppt_separable(gen.GeneratorConfig(seed, m, n))
            direct, partial = is_ppt(a)
            assert direct.is_psd and partial.is_psd

    def test_entangled_state_is_not_ppt(self):
        psi = np.zeros(4)
        psi[0] = psi[3] = 1 / math.sqrt(2)
        direct, partial = is_ppt(BlockMatrix(2, 2, np.outer(psi, psi)))
        assert direct.is_psd
        assert not partial.is_psd
        assert partial.lambda_min == pytest.approx(-0.5)


class TestSectorMargin:
    def test_positive_definite(self, rng):
        alpha, ok = sector_margin(rand_psd(rng, 4) + 0.1 * np.eye(4))
        assert ok and alpha == 0.0

    def test_diag_family(self):
        for t in (0.1, 0.5, 1.0, 3.0):
            alpha, ok = sector_margin(np.diag([1 + 1j * t, 1 - 1j * t]))
            assert ok
            assert alpha == pytest.approx(math.atan(t), abs=1e-14)

    def test_not_sectorial(self):
        alpha, ok = sector_margin(np.diag([1.0, -1.0]))
        assert not ok and math.isinf(alpha)

    def test_scale_invariance(self, rng):
        for seed in range(50):
            a = gen.rand_sector(4, 1.0, seed)
            base, _ = sector_margin(a)
            for c in (1e-3, 7.0, 1e3):
                assert abs(sector_margin(c * a)[0] - base) <= 1e-10

    @pytest.mark.parametrize("alpha", [0.0, math.pi / 6, math.pi / 4, math.pi / 3, 1.5])
    def test_generator_bound(self, alpha):
        for seed in range(100):
            margin, ok = sector_margin(gen.rand_sector(4, alpha, seed))
            assert ok and margin <= alpha + 1e-9

    def test_zero_angle_iff_hermitian_pd(self, rng):
        pd = rand_psd(rng, 3) + 0.5 * np.eye(3)
        assert sector_margin(pd)[0] <= 1e-9
        assert sector_margin(pd + 1e-3j * rand_herm(rng, 3))[0] > 1e-9


class TestSupportFunction:
    def test_identity(self):
        for theta in (-1.2, -0.3, 0.0, 0.7, 1.5):
            assert support_function(np.eye(3), theta) == pytest.approx(math.cos(theta), abs=1e-14)

    def test_diag_family_at_zero(self):
        assert support_function(np.diag([1 + 2j, 1 - 2j]), 0.0) == pytest.approx(1.0, abs=1e-14)

    def test_sector_implies_nonnegative_support(self):
        for seed in range(20):
            a = gen.rand_sector(3, math.pi / 4, seed)
            alpha, _ = sector_margin(a)
            for theta in np.linspace(-(math.pi / 2 - alpha), math.pi / 2 - alpha, 21):
                assert support_function(a, theta) >= -1e-10

    def test_grid_agrees_with_algebraic(self):
        for seed in range(100):
            alpha = (math.pi / 6, math.pi / 4, math.pi / 3)[seed % 3]
            a = gen.rand_sector(3, alpha, seed)
            assert abs(sector_margin_grid(a, 181) - sector_margin(a)[0]) <= 1e-6

    def test_grid_diag_family(self):
        assert sector_margin_grid(np.diag([1 + 1j, 1 - 1j])) == pytest.approx(math.pi / 4, abs=1e-9)
