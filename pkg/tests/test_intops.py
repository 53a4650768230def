import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad as scipy_quad

from striplab import intops
from striplab.errors import TruncationWarning, ZeroVector
from striplab.gfunc import kappa_side
from striplab.intops import (DiscreteOperator, OperatorKind, Scheme, build_J,
                             field_of_values, operator_norm, rayleigh,
                             theorem35_ab, theorem35_crosscheck)


class TestBuild:
    def test_validation(self):
        with pytest.raises(ValueError):
            build_J("Jplus", "trapezoid", 1.0, 4)
        with pytest.raises(ValueError):
            build_J("Jplus", "trapezoid", -1.0, 64)

    def test_forward_constant(self):
        op = build_J("Jplus", "trapezoid", 1.0, 64)
        err = np.max(np.abs(op.apply(np.ones(64)) - op.grid))
        assert err < 1e-3  # exact for the midpoint scheme

    def test_backward_constant(self):
        op = build_J("Jminus", "trapezoid", 1.0, 64)
        err = np.max(np.abs(op.apply(np.ones(64)) - (1.0 - op.grid)))
        assert err < 1e-3

    def test_triangularity_exact(self):
        op = build_J("Jplus", "trapezoid", 1.0, 32)
        assert np.all(np.triu(op.matrix, 1) == 0.0)
        om = build_J("Jminus", "trapezoid", 1.0, 32)
        assert np.all(np.tril(om.matrix, -1) == 0.0)

    def test_convergence_order(self):
        errs = {}
        for n in (64, 128):
            op = build_J("Jplus", "trapezoid", 1.0, n)
            got = op.apply(np.sin(op.grid))
            errs[n] = np.max(np.abs(got - (1.0 - np.cos(op.grid))))
        ratio = errs[64] / errs[128]
        assert 3.5 < ratio < 4.5

    def test_sinc_dominance(self):
        op = build_J("Jplus", "sinc", 1.0, 33)
        n = op.n
        upper = np.abs(op.matrix[np.triu_indices(n, 3)])
        lower = np.abs(op.matrix[np.tril_indices(n, -1)])
        assert np.max(upper) < 0.05 * np.max(lower)

    def test_sinc_forward_constant(self):
        op = build_J("Jplus", "sinc", 1.0, 65)
        assert np.max(np.abs(op.apply(np.ones(65)) - op.grid)) < 1e-6

    def test_sides_sum_to_total(self):
        jp = build_J("Jplus", "sinc", 2.0, 33)
        jm = build_J("Jminus", "sinc", 2.0, 33)
        g = np.cos(jp.grid)
        total = np.sum(jp.weights * g)
        assert np.max(np.abs(jp.apply(g) + jm.apply(g) - total)) < 1e-12


class TestNorm:
    def test_volterra_norm_value(self):
        op = build_J("Jplus", "trapezoid", 1.0, 512)
        assert abs(operator_norm(op) - 2.0 / math.pi) < 1e-3

    def test_bound_over_sizes(self):
        for n in (16, 32, 64, 128, 256, 512):
            op = build_J("Jplus", "trapezoid", 1.0, n)
            assert operator_norm(op) <= 1.0 / math.sqrt(2.0) + 1e-12
            om = build_J("Jminus", "trapezoid", 1.0, n)
            assert operator_norm(om) <= 1.0 / math.sqrt(2.0) + 1e-12

    def test_beta_scaling(self):
        a = operator_norm(build_J("Jplus", "trapezoid", 1.0, 256))
        b = operator_norm(build_J("Jplus", "trapezoid", 2.0, 256))
        assert abs(b - 2.0 * a) < 1e-6 * b


class TestFieldOfValues:
    @pytest.fixture(scope="class")
    def fov_plus(self):
        op = build_J("Jplus", "trapezoid", 1.0, 128)
        return op, field_of_values(op, 360)

    def test_right_half_plane(self, fov_plus):
        _, fov = fov_plus
        assert fov.min_real() >= -1e-12

    def test_rayleigh_samples_inside(self, fov_plus):
        _, fov = fov_plus
        assert fov.contains(fov.rayleigh_samples, 1e-10)

    def test_convexity_midpoints(self, fov_plus):
        _, fov = fov_plus
        s = fov.rayleigh_samples
        mids = 0.5 * (s[:-1] + s[1:])
        assert fov.contains(mids, 1e-8)

    def test_spectrum_containment(self, fov_plus):
        op, fov = fov_plus
        eig = np.linalg.eigvals(
            intops._weighted_similarity(op.matrix, op.weights))
        assert fov.contains(eig, 1e-8)

    def test_identity_collapses(self):
        fov = field_of_values(np.eye(5), 36)
        assert np.max(np.abs(fov.support_points - 1.0)) < 1e-12

    def test_normal_matrix_segment(self):
        fov = field_of_values(np.diag([0.0, 1.0]), 360)
        assert np.max(np.abs(fov.support_points.imag)) < 1e-12
        assert -1e-12 <= fov.min_real() and fov.max_real() <= 1.0 + 1e-12

    def test_angle_validation(self):
        with pytest.raises(ValueError):
            field_of_values(np.eye(3), 4)

    def test_backward_is_conjugate_of_forward(self, fov_plus):
        op, fov = fov_plus
        om = build_J("Jminus", "trapezoid", 1.0, 128)
        fm = field_of_values(om, 360)
        gap = np.max(np.abs(np.sort_complex(fm.support_points)
                            - np.sort_complex(np.conj(fov.support_points))))
        assert gap < 1e-10
        # adjointness puts the backward range in the RIGHT half plane too
        assert fm.min_real() >= -1e-12


class TestRayleigh:
    def test_real_part_identity(self, rng):
        op = build_J("Jplus", "trapezoid", 1.0, 64)
        g = rng.normal(size=64)
        r = rayleigh(op, g)
        expected = 0.5 * abs(np.sum(op.weights * g)) ** 2 \
            / np.sum(op.weights * g ** 2)
        assert abs(r.real - expected) < 1e-14

    def test_zero_weighted_sum(self):
        op = build_J("Jplus", "trapezoid", 1.0, 64)
        g = np.sin(2 * math.pi * op.grid)  # integral vanishes
        g = g - np.sum(op.weights * g) / np.sum(op.weights)
        r = rayleigh(op, g)
        assert abs(r.real) < 1e-8

    def test_identity_matrix(self, rng):
        f = rng.normal(size=7) + 1j * rng.normal(size=7)
        assert abs(rayleigh(np.eye(7), f) - 1.0) < 1e-14

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            rayleigh(np.eye(3), np.zeros(3))


class TestRangeNumbers:
    def test_exponential_closed_form(self, cfg):
        r = theorem35_ab(lambda y: np.exp(-y), cfg)
        assert abs(r.a + math.pi / 4.0) < 1e-12
        assert abs(r.b - 0.5) < 1e-12

    def test_exponential2_closed_form(self, cfg):
        r = theorem35_ab(lambda y: np.exp(-2.0 * y), cfg)
        assert abs(r.a + math.pi / 16.0) < 1e-12
        assert abs(r.b - 0.125) < 1e-12

    def test_strip_kernel_against_adaptive_oracle(self, cfg):
        # independent oracle: adaptive Gauss-Kronrod on the same integrals
        k = lambda y: kappa_side(0.5, y, "minus")
        r = theorem35_ab(k, cfg)
        moment_ref = scipy_quad(lambda y: y * k(y) ** 2, 0, np.inf,
                                limit=200)[0]
        total_ref = scipy_quad(k, 0, np.inf, limit=200)[0]
        assert abs(r.a + math.pi * moment_ref) < 1e-9
        assert abs(r.b - 0.5 * total_ref ** 2) < 1e-9
        assert r.a < 0 and r.b > 0

    def test_randomized_positive_kernels(self, cfg):
        rng = np.random.default_rng(7)
        for _ in range(20):
            c = rng.uniform(0.1, 2.0, size=3)
            lam = rng.uniform(0.5, 4.0, size=3)
            k = lambda y: (c[0] * np.exp(-lam[0] * y)
                           + c[1] * np.exp(-lam[1] * y)
                           + c[2] * np.exp(-lam[2] * y))
            r = theorem35_ab(k, cfg)
            assert r.a < 0.0
            assert r.b > 0.0


class TestCrosscheck:
    def test_unit_exponential(self, cfg):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            lhs, rhs, residual = theorem35_crosscheck(
                lambda y: np.exp(-y), 100.0, 1024, cfg)
        assert residual < 5e-3
        assert abs(rhs - complex(-math.pi / 4.0, 0.5)) < 1e-10
        # the real side converges too, but only as a report
        assert abs(lhs.real - rhs.real) < 5e-2

    def test_vanishing_mean_kernel(self, cfg):
        k = lambda y: np.exp(-y) - 2.0 * np.exp(-2.0 * y)  # integral = 0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            lhs, rhs, _ = theorem35_crosscheck(k, 100.0, 1024, cfg)
        assert abs(rhs.imag) < 1e-12
        assert abs(lhs.imag) < 5e-3

    def test_truncation_warning(self, cfg):
        with pytest.warns(TruncationWarning):
            theorem35_crosscheck(lambda y: np.exp(-y), 50.0, 512, cfg)

    def test_size_validation(self, cfg):
        with pytest.raises(ValueError):
            theorem35_crosscheck(lambda y: np.exp(-y), 100.0, 128, cfg)
