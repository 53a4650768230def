import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from striplab import specialfun
from striplab.gfunc import (KernelSide, StripPoint, decay_slope,
                            functional_equation_residual, g_and_g_sigma,
                            g_bulk, g_half, g_half_bulk, g_integral,
                            g_integral_err, g_sigma, kappa, kappa_side)

# frozen from a 30-digit multiprecision product gamma(z) * eta(z)
G_REF = {
    (0.5, 5.0): complex(-0.00171218274239759548, -0.0000717142755412816239),
    (0.2, 40.0): complex(1.78037829230031033e-27, -1.0956057638255348e-27),
    (0.8, 33.33): complex(-1.3505780263608745e-22, 4.02630296238628371e-23),
    (0.35, 12.5): complex(1.24975235106096552e-8, -5.40574498450924158e-9),
}


class TestStripPoint:
    def test_valid(self):
        p = StripPoint(0.4, 7.0)
        assert p.z == complex(0.4, 7.0)
        assert p.conjugate().t == -7.0

    @pytest.mark.parametrize("sigma", [0.0, 1.0, -0.2, 1.5])
    def test_invalid(self, sigma):
        with pytest.raises(ValueError):
            StripPoint(sigma, 0.0)


class TestKernels:
    def test_at_origin(self):
        assert abs(kappa(0.37, 0.0) - 1.0 / (1.0 + math.e)) < 1e-15

    def test_scalar_value(self):
        # direct scalar evaluation oracle
        expected = math.exp(0.5) / (1.0 + math.exp(math.e))
        assert abs(kappa(0.5, 1.0) - expected) < 1e-15

    def test_overflow_is_exact_zero(self):
        assert kappa(0.5, 50.0) == 0.0

    def test_minus_scalar_value(self):
        expected = math.exp(-0.5) / (1.0 + math.exp(math.exp(-1.0)))
        assert abs(kappa_side(0.5, 1.0, "minus") - expected) < 1e-15

    @pytest.mark.parametrize("side", ["minus", "plus"])
    def test_vanishes_on_negative_axis(self, side):
        assert kappa_side(0.3, -3.0, side) == 0.0

    def test_reflection_identity_scalar(self):
        assert abs(kappa(0.3, -2.0) - kappa_side(0.3, 2.0, "minus")) < 1e-15

    @settings(max_examples=30, deadline=None)
    @given(sigma=st.floats(0.05, 0.95), y=st.floats(0.01, 40.0))
    def test_reflection_identity(self, sigma, y):
        assert abs(kappa(sigma, -y) - kappa_side(sigma, y, "minus")) \
            <= 1e-15 * max(kappa(sigma, -y), 1e-300)

    def test_weighted_membership_integrals_converge(self, cfg):
        # square-integrability against e^{eps|y|} for eps = sigma/2
        from striplab.quadrule import integrate_halfline

        for sigma in (0.3, 0.5, 0.8):
            eps = sigma / 2.0
            for side in (KernelSide.MINUS, KernelSide.PLUS):
                val, _ = integrate_halfline(
                    lambda y: np.asarray(kappa_side(sigma, y, side)) ** 2
                    * np.exp(eps * y),
                    cfg, y_max=90.0 / sigma)
                assert np.isfinite(abs(val)) and abs(val) > 0


class TestGValues:
    def test_log2_direct(self, cfg):
        assert abs(g_integral(1.0, "direct", cfg) - math.log(2.0)) < 1e-12

    def test_pi2_12_direct(self, cfg):
        assert abs(g_integral(2.0, "direct", cfg) - math.pi ** 2 / 12.0) < 1e-12

    def test_first_zero_small(self, cfg):
        assert abs(g_integral(complex(0.5, 14.1347251417), "fourier", cfg)) < 1e-7

    @pytest.mark.parametrize("key", sorted(G_REF))
    def test_reference_values(self, key):
        z = complex(*key)
        ref = G_REF[key]
        got = g_integral(z, "fourier")
        assert abs(got - ref) <= 1e-10 * abs(ref)

    def test_method_agreement(self, cfg):
        for s in (0.3, 0.5, 0.7):
            for t in (0.0, 1.0, 3.0):
                a = g_integral(complex(s, t), "direct", cfg)
                b = g_integral(complex(s, t), "fourier", cfg)
                assert abs(a - b) <= 1e-10 * max(abs(b), 1e-3)

    def test_ratio_identity_against_oracle(self, cfg):
        # quadrature value over the envelope equals the series zeta
        for s in (0.25, 0.5, 0.75):
            for t in (2.0, 11.0, 23.0):
                z = complex(s, t)
                lhs = g_integral(z, "fourier", cfg) / specialfun.w_factor(z)
                rhs = specialfun.zeta_reference(z)
                assert abs(lhs - rhs) <= 1e-10 * abs(rhs)

    def test_schwarz_reflection_bulk(self, cfg):
        ts = np.linspace(0.5, 25.0, 9)
        up = g_bulk(0.4, ts, cfg)
        dn = g_bulk(0.4, -ts, cfg)
        assert np.max(np.abs(dn - np.conj(up))) < 1e-12

    def test_eval_with_error_estimate(self, cfg):
        val, err = g_integral_err(1.0, "direct", cfg)
        assert abs(val - math.log(2.0)) < 1e-12
        assert 0 <= err < 1e-10


class TestSides:
    def test_sum_identity(self, cfg):
        z = complex(0.5, 5.0)
        total = g_integral(z, "fourier", cfg)
        split = g_half(z, "minus", cfg) + g_half(z, "plus", cfg)
        assert abs(total - split) < 1e-10

    def test_real_positive_at_t0(self, cfg):
        for side in ("minus", "plus"):
            v = g_half(complex(0.5, 0.0), side, cfg)
            assert abs(v.imag) < 1e-14
            assert v.real > 0

    def test_conjugate_relation(self, cfg):
        z = complex(0.4, 3.0)
        for side in ("minus", "plus"):
            a = g_half(StripPoint(0.4, -3.0), side, cfg)
            b = g_half(z, side, cfg)
            assert abs(a - b.conjugate()) < 1e-12

    def test_bulk_matches_scalar(self, cfg):
        ts = np.array([0.5, 4.0, 17.0])
        for side in ("minus", "plus"):
            bulk = g_half_bulk(0.45, ts, side, cfg)
            for i, t in enumerate(ts):
                scalar = g_half(complex(0.45, t), side, cfg)
                assert abs(bulk[i] - scalar) < 1e-11


class TestSigmaDerivative:
    def test_finite_difference_match(self, cfg):
        z = complex(0.5, 2.0)
        gs = g_sigma(z, "full", cfg)
        h = 1e-5
        fd = (g_integral(complex(0.5 + h, 2.0), "fourier", cfg)
              - g_integral(complex(0.5 - h, 2.0), "fourier", cfg)) / (2 * h)
        assert abs(gs - fd) <= 1e-6 * abs(gs)

    def test_side_sum_identity(self, cfg):
        z = complex(0.3, 4.0)
        total = g_sigma(z, "full", cfg)
        split = g_sigma(z, "minus", cfg) + g_sigma(z, "plus", cfg)
        assert abs(total - split) < 1e-10

    def test_real_at_t0(self, cfg):
        assert abs(g_sigma(complex(0.7, 0.0), "full", cfg).imag) < 1e-14

    def test_pair_evaluation(self, cfg):
        z = complex(0.5, 9.0)
        g, gs = g_and_g_sigma(z, cfg)
        assert abs(g - g_integral(z, "fourier", cfg)) < 1e-14 * abs(g)
        assert abs(gs - g_sigma(z, "full", cfg)) < 1e-13 * abs(gs)


class TestFunctionalEquation:
    @pytest.mark.parametrize("z", [complex(0.3, 5.0), complex(0.5, 10.0),
                                   complex(0.5, 0.0)])
    def test_residual_small(self, z, cfg):
        assert functional_equation_residual(z, cfg) < 1e-9

    def test_conjugate_residual(self, cfg):
        a = functional_equation_residual(complex(0.5, 10.0), cfg)
        b = functional_equation_residual(complex(0.5, -10.0), cfg)
        assert abs(a - b) < 1e-9

    def test_real_on_axis(self, cfg):
        assert abs(g_integral(complex(0.5, 0.0), "fourier", cfg).imag) < 1e-15


class TestDecay:
    def test_slope_on_half_line(self, cfg):
        slope = decay_slope(0.5, 20.0, 60.0, 41, cfg)
        assert abs(slope + math.pi / 2) < 0.05 * (math.pi / 2)

    def test_slope_off_half_line(self, cfg):
        slope = decay_slope(0.3, 20.0, 60.0, 41, cfg)
        assert abs(slope + math.pi / 2) < 0.05 * (math.pi / 2)

    def test_fit_calibration(self):
        # the least-squares machinery itself, on synthetic e^{-t}
        ts = np.linspace(20.0, 60.0, 41)
        slope = float(np.polyfit(ts, np.log(np.exp(-ts)), 1)[0])
        assert abs(slope + 1.0) < 1e-12
