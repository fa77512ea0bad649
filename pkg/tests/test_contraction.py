import numpy as np
import pytest

from conftest import example1_base, example2_base, example3_base, random_sl2
from projlyap.cocycle import D, R, Cocycle, iterate_cocycle
from projlyap.contraction import (h_alpha, h_alpha_curve, h_alpha_deriv_bound, kappa_alpha,
                                  select_alpha_n)
from projlyap.errors import BadParam, NoContraction, NotSl2
from projlyap.projgeom import PI

# max of H_0.1 for the nine-step {S_8, S_1.9} cocycle, evaluated in 60-digit
# arithmetic at the contracted direction of S_8^9 (frozen oracle)
EXAMPLE2_KAPPA_MP = 0.678625473879


def brute_h(mats, probs, alpha, num):
    """H_alpha by direct matrix-vector products on a uniform grid."""
    t = np.arange(num) * (PI / num)
    v = np.stack([np.cos(t), np.sin(t)])
    out = np.zeros(num)
    for A, p in zip(mats, probs):
        w = A @ v
        out += p * (w[0] ** 2 + w[1] ** 2) ** (-alpha)
    return t, out


class TestH:
    def test_rotations(self):
        c = Cocycle([R(0.3), R(1.7)])
        assert np.allclose(h_alpha(c, 0.4, np.linspace(0, 3, 7)), 1.0)

    def test_identity(self):
        assert h_alpha(Cocycle([np.eye(2)]), 0.7, 1.2) == pytest.approx(1.0)

    def test_two_term_value(self):
        c = Cocycle([D(3.5), R(0.4)])
        expected = 0.5 * (3.5 ** -0.2 + 1.0)
        assert expected == pytest.approx(0.8891852707755854, rel=1e-15)
        assert h_alpha(c, 0.1, 0.0) == pytest.approx(expected, rel=1e-14)

    def test_requires_sl2(self):
        with pytest.raises(NotSl2):
            h_alpha(Cocycle([2 * np.eye(2)]), 0.5, 0.0)

    def test_alpha_to_zero(self):
        rng = np.random.default_rng(1)
        c = Cocycle(random_sl2(rng, 5))
        assert np.all(np.abs(h_alpha(c, 1e-6, np.linspace(0, PI, 50)) - 1.0) < 1e-4)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(2)
        c = Cocycle(random_sl2(rng, 4))
        t, h = brute_h(c.mats, c.probs, 0.3, 1000)
        assert np.allclose(h_alpha(c, 0.3, t), h, rtol=1e-12)


class TestDerivBound:
    def test_examples(self):
        assert h_alpha_deriv_bound(Cocycle([np.eye(2)]), 0.5) == pytest.approx(1.0)
        assert h_alpha_deriv_bound(Cocycle([R(0.8)]), 0.3) == pytest.approx(0.6)
        assert h_alpha_deriv_bound(Cocycle([D(2.0)]), 0.5) == pytest.approx(8.0)

    def test_dominates_finite_differences(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            c = Cocycle(random_sl2(rng, 3, 4.0))
            for alpha in (0.1, 0.5, 0.9):
                t, h = brute_h(c.mats, c.probs, alpha, 200_000)
                fd = np.abs(np.diff(np.append(h, h[0]))) / (PI / 200_000)
                assert fd.max() <= h_alpha_deriv_bound(c, alpha)


class TestKappa:
    def test_rotations(self):
        cert = kappa_alpha(Cocycle([R(0.4), R(2.0)]), 0.3, 64)
        assert cert.kappa_refined == pytest.approx(1.0, abs=1e-14)
        assert cert.kappa_upper <= 1 + 2 * 0.3 * PI / 128

    def test_grid_certificate_formula(self):
        c = Cocycle([D(1.5), R(0.9)])
        cert = kappa_alpha(c, 0.5, 256)
        assert cert.grid_upper == pytest.approx(cert.grid_max + cert.lipschitz_bound * cert.h / 2)
        assert cert.kappa_refined <= cert.kappa_upper <= cert.grid_upper

    def test_small_grid_rejected(self):
        with pytest.raises(BadParam):
            kappa_alpha(Cocycle([D(2.0)]), 0.5, 8)

    @pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
    def test_single_dilation(self, alpha):
        # H_alpha = |D_2 x|^{-2 alpha} peaks at pi/2 where |D_2 e2| = 1/2
        t, h = brute_h([D(2.0)], [1.0], alpha, 100_000)
        assert h.max() == pytest.approx(4 ** alpha, rel=1e-14)
        cert = kappa_alpha(Cocycle([D(2.0)]), alpha)
        assert cert.kappa_refined == pytest.approx(4 ** alpha, rel=1e-12)
        assert cert.kappa_upper >= 4 ** alpha

    def test_soundness_random(self):
        rng = np.random.default_rng(4)
        for _ in range(8):
            k = int(rng.integers(1, 5))
            p = rng.uniform(0.1, 1, k)
            c = Cocycle(random_sl2(rng, k, 6.0), p / p.sum())
            alpha = float(rng.uniform(0.05, 0.95))
            cert = kappa_alpha(c, alpha, 512)
            _, h = brute_h(c.mats, c.probs, alpha, 200_000)
            assert h.max() <= cert.kappa_upper
            assert cert.kappa_refined <= cert.kappa_upper
            assert cert.kappa_refined >= h.max() - 1e-9

    def test_example1(self):
        cert = kappa_alpha(iterate_cocycle(example1_base(), 3), 0.5, 4096, n=3)
        assert cert.kappa_refined == pytest.approx(0.661033, abs=5e-6)
        assert cert.kappa_upper < 0.6611

    def test_example3(self):
        cert = kappa_alpha(iterate_cocycle(example3_base(), 9), 0.1, 4096, n=9)
        assert cert.kappa_refined == pytest.approx(0.796829, abs=5e-6)
        assert cert.kappa_refined <= cert.kappa_upper < 0.7969

    def test_example2_against_high_precision(self):
        # the top spike is resolved only to the rounding of the 512 products
        cert = kappa_alpha(iterate_cocycle(example2_base(), 9), 0.1, 4096, n=9)
        assert cert.kappa_refined == pytest.approx(EXAMPLE2_KAPPA_MP, abs=1e-4)
        assert cert.kappa_upper >= EXAMPLE2_KAPPA_MP


class TestSelect:
    def test_rotation_has_no_contraction(self):
        with pytest.raises(NoContraction):
            select_alpha_n(Cocycle([R(0.4)]), n_max=3)

    def test_single_dilation_has_no_contraction(self):
        # kappa_alpha = 4^alpha > 1 for every alpha and every iterate
        with pytest.raises(NoContraction):
            select_alpha_n(Cocycle([D(2.0)]), [0.1 * i for i in range(1, 10)], n_max=1)

    def test_example2(self):
        alpha, n, cert = select_alpha_n(example2_base(), [0.1, 0.2, 0.3], n_max=9)
        assert n <= 9 and cert.kappa_upper < 1 and cert.alpha == alpha

    def test_picks_smallest_n_then_best_alpha(self):
        c = example1_base()
        grid = [0.25, 0.5, 0.75]
        alpha, n, cert = select_alpha_n(c, grid, n_max=3)
        assert n == 1
        uppers = [kappa_alpha(c, a).kappa_upper for a in grid]
        assert alpha == grid[int(np.argmin(uppers))]

    def test_bad_grid(self):
        with pytest.raises(BadParam):
            select_alpha_n(Cocycle([D(2.0)]), [1.5])

    def test_curve(self):
        t, h = h_alpha_curve(Cocycle([D(2.0)]), 0.5, 64)
        assert len(t) == 64 and h[32] == pytest.approx(2.0)
