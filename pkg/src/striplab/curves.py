"""Range numbers, the segment L(s), the four comparison curves, and the
half-plane Cauchy integrals P.

For each sigma the two one-sided kernels give a pair of range numbers
c = a + i b with a = -pi int y kappa^2 and b = (1/2)(int kappa)^2; both
have a < 0 and b > 0 by positivity of the kernels.  The segment
L(s) = -(1-s) c_minus + s c_plus interpolates between -c_minus and
c_plus, and substituting L(s) for the operator reciprocal in the
direct-sum expressions produces the four scalar curves evaluated here.

Everything below is computed literally from those definitions.  The
source text asserts sign patterns for the curves that are mutually
inconsistent (it places Im L(0) = -b_minus < 0 while also claiming
Im L(s) > 0 throughout); this module takes no side: it evaluates the
formulas as written and reports which sign claims hold numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrule
from .errors import DenominatorNearRealAxis, OnRealAxis
from .gfunc import KernelSide, _as_side, g_half_bulk, kappa_side
from .quadrule import QuadConfig

__all__ = [
    "RangeNumbers",
    "CurveSample",
    "CurveReport",
    "range_numbers",
    "P_side",
    "L_segment",
    "curve_eval",
    "sigma_sweep",
]


@dataclass(frozen=True)
class RangeNumbers:
    sigma: float
    a_minus: float
    b_minus: float
    a_plus: float
    b_plus: float

    @property
    def c_minus(self) -> complex:
        return complex(self.a_minus, self.b_minus)

    @property
    def c_plus(self) -> complex:
        return complex(self.a_plus, self.b_plus)


def _kernel_cutoff(sigma: float, side: KernelSide) -> float:
    if side is KernelSide.MINUS:
        return 43.0 / sigma
    return math.log(700.0) + 0.1


def range_numbers(sigma: float, cfg: QuadConfig | None = None) -> RangeNumbers:
    """Quadrature values of a_-/+ and b_-/+ for the kernels at this sigma.

    Uses the Gauss-Legendre half-line engine; the independent trapezoid
    route through the operator module reproduces the same numbers, which
    the test suite checks to 1e-12.
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    if not 0.0 < sigma < 1.0:
        raise ValueError("sigma must lie in (0, 1)")
    out = {}
    for side in (KernelSide.MINUS, KernelSide.PLUS):
        y_max = _kernel_cutoff(sigma, side)
        moment, _ = quadrule.integrate_halfline(
            lambda y: y * np.asarray(kappa_side(sigma, y, side)) ** 2,
            cfg, y_max=y_max)
        total, _ = quadrule.integrate_halfline(
            lambda y: kappa_side(sigma, y, side), cfg, y_max=y_max)
        a = -math.pi * float(np.real(moment))
        b = 0.5 * float(np.real(total)) ** 2
        if not (a < 0.0 and b > 0.0):
            raise ArithmeticError(
                f"range numbers lost their signs at sigma={sigma}: a={a}, b={b}")
        out[side] = (a, b)
    return RangeNumbers(sigma=sigma,
                        a_minus=out[KernelSide.MINUS][0],
                        b_minus=out[KernelSide.MINUS][1],
                        a_plus=out[KernelSide.PLUS][0],
                        b_plus=out[KernelSide.PLUS][1])


def L_segment(rn: RangeNumbers, s: float) -> complex:
    """L(s) = -(1-s) c_minus + s c_plus for s in [0, 1]."""
    if not 0.0 <= s <= 1.0:
        raise ValueError("s must lie in [0, 1]")
    return -(1.0 - s) * rn.c_minus + s * rn.c_plus


def P_side(sigma: float, zeta: complex, side,
           cfg: QuadConfig | None = None) -> tuple[complex, complex, float]:
    """Both representations of the half-plane Cauchy transforms P.

    minus (zeta in the lower half plane):
        P^-(sigma, zeta) = int_0^inf G^+(sigma + i t) e^{-i zeta t} dt
                         = +i int_0^inf kappa^+(sigma, y) / (y - zeta) dy
    plus (zeta in the upper half plane): the mirrored pair with G^- and
    kappa^-.  Returns (fourier_form, cauchy_form, relative_residual).
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    side = _as_side(side)
    zeta = complex(zeta)
    if abs(zeta.imag) < 1e-8:
        raise OnRealAxis("P is not evaluated on the real axis "
                         "(boundary values need the jump formulas)")
    if side is KernelSide.MINUS:
        if zeta.imag > 0:
            raise ValueError("minus-side P needs Im zeta < 0")
        g_side = KernelSide.PLUS
        phase = -1j * zeta
        cauchy_sign = 1j
    else:
        if zeta.imag < 0:
            raise ValueError("plus-side P needs Im zeta > 0")
        g_side = KernelSide.MINUS
        phase = 1j * zeta
        cauchy_sign = -1j

    decay = abs(zeta.imag)
    t_max = 45.0 / decay

    def f_t(ts):
        return g_half_bulk(sigma, ts, g_side, cfg) * np.exp(phase * ts)

    fourier, _ = quadrule.integrate_finite(
        f_t, 0.0, t_max, cfg, osc_freq=abs(zeta.real) + decay)

    kside = g_side
    y_max = _kernel_cutoff(sigma, kside)
    feature = _pole_feature(zeta, y_max)

    def f_y(y):
        return np.asarray(kappa_side(sigma, y, kside)) / (y - zeta)

    cauchy_val, _ = quadrule.integrate_halfline(
        f_y, cfg, y_max=y_max, feature=feature)
    cauchy = cauchy_sign * cauchy_val
    residual = abs(fourier - cauchy) / max(abs(fourier), abs(cauchy), 1e-300)
    return fourier, cauchy, residual


@dataclass(frozen=True)
class CurveSample:
    s: float
    L: complex
    C: complex
    C_sigma: complex
    C_prime: complex
    C_prime_sigma: complex
    im_C_sigma_poisson: float
    im_C_prime_sigma_poisson: float


@dataclass(frozen=True)
class CurveReport:
    sigma: float
    samples: list[CurveSample]
    sign_summary: dict[str, bool]
    min_abs_C: float
    argmin_C: float
    min_abs_C_prime: float
    argmin_C_prime: float
    t_context: float | None = None

    def with_t(self, t: float) -> "CurveReport":
        return CurveReport(sigma=self.sigma, samples=self.samples,
                           sign_summary=self.sign_summary,
                           min_abs_C=self.min_abs_C, argmin_C=self.argmin_C,
                           min_abs_C_prime=self.min_abs_C_prime,
                           argmin_C_prime=self.argmin_C_prime, t_context=t)


def _pole_feature(w: complex, y_max: float):
    """Panel-grading hint for an integrand with a pole at y = w: the
    nearest point of (0, y_max) and the pole's distance to it."""
    p = min(max(w.real, 0.0), y_max)
    dist = abs(w - p)
    return (p, max(dist, 1e-12))


def _halfline_with_pole(sigma, side, weight_pow, w, cfg):
    """integral of y^p kappa_side (1 - y/(y - w)) dy over (0, inf).

    The factor (1 - y/(y - w)) = -w/(y - w) has a pole at y = w; panels
    are graded toward the nearest point of the integration range.
    """
    y_max = _kernel_cutoff(sigma, side)
    feature = _pole_feature(w, y_max)

    def f(y):
        base = np.asarray(kappa_side(sigma, y, side), dtype=complex)
        if weight_pow:
            base = base * y ** weight_pow
        return base * (1.0 - y / (y - w))

    val, _ = quadrule.integrate_halfline(f, cfg, y_max=y_max, feature=feature)
    return val


def _poisson_part(sigma, side, denom_shift, li, cfg):
    """integral of y^2 kappa_side L_i / ((y + denom_shift)^2 + L_i^2) dy."""
    y_max = _kernel_cutoff(sigma, side)
    feature = _pole_feature(complex(-denom_shift, li), y_max)

    def f(y):
        base = np.asarray(kappa_side(sigma, y, side))
        return base * y ** 2 * li / ((y + denom_shift) ** 2 + li ** 2)

    val, _ = quadrule.integrate_halfline(f, cfg, y_max=y_max, feature=feature)
    return float(np.real(val))


def curve_sample(rn: RangeNumbers, s: float,
                 cfg: QuadConfig | None = None) -> CurveSample:
    """All four curves and the two Poisson-form imaginary parts at one s."""
    cfg = cfg or quadrule.DEFAULT_CONFIG
    sigma = rn.sigma
    L = L_segment(rn, s)
    if abs(L.imag) < 1e-10:
        raise DenominatorNearRealAxis(
            f"Im L(s) = {L.imag:.2e} at s={s}; the curve denominators "
            "touch the positive axis")
    lr, li = L.real, L.imag

    am_plusL = _halfline_with_pole(sigma, KernelSide.MINUS, 0, -L, cfg)
    ap_minusL = _halfline_with_pole(sigma, KernelSide.PLUS, 0, L, cfg)
    am_minusL = _halfline_with_pole(sigma, KernelSide.MINUS, 0, L, cfg)
    ap_plusL = _halfline_with_pole(sigma, KernelSide.PLUS, 0, -L, cfg)
    bm_plusL = _halfline_with_pole(sigma, KernelSide.MINUS, 1, -L, cfg)
    bp_minusL = _halfline_with_pole(sigma, KernelSide.PLUS, 1, L, cfg)
    bm_minusL = _halfline_with_pole(sigma, KernelSide.MINUS, 1, L, cfg)
    bp_plusL = _halfline_with_pole(sigma, KernelSide.PLUS, 1, -L, cfg)

    c_val = am_plusL + ap_minusL
    c_sigma = -bm_plusL + bp_minusL
    c_prime = am_minusL + ap_plusL
    c_prime_sigma = -bm_minusL + bp_plusL

    im_cs_poisson = (_poisson_part(sigma, KernelSide.MINUS, lr, -li, cfg)
                     + _poisson_part(sigma, KernelSide.PLUS, -lr, -li, cfg))
    im_cps_poisson = (_poisson_part(sigma, KernelSide.MINUS, -lr, li, cfg)
                      + _poisson_part(sigma, KernelSide.PLUS, lr, li, cfg))

    return CurveSample(s=s, L=L, C=complex(c_val), C_sigma=complex(c_sigma),
                       C_prime=complex(c_prime),
                       C_prime_sigma=complex(c_prime_sigma),
                       im_C_sigma_poisson=im_cs_poisson,
                       im_C_prime_sigma_poisson=im_cps_poisson)


def curve_eval(sigma: float, s_grid, cfg: QuadConfig | None = None,
               rn: RangeNumbers | None = None) -> CurveReport:
    """Sample the four curves over an s grid and summarize the sign
    claims.  The Poisson forms are computed independently of the complex
    quadrature and agree with it to the engine tolerance."""
    cfg = cfg or quadrule.DEFAULT_CONFIG
    rn = rn or range_numbers(sigma, cfg)
    s_grid = np.asarray(s_grid, dtype=float)
    samples = [curve_sample(rn, float(s), cfg) for s in s_grid]

    im_c = np.array([smp.C.imag for smp in samples])
    im_cp = np.array([smp.C_prime.imag for smp in samples])
    im_cs = np.array([smp.C_sigma.imag for smp in samples])
    im_cps = np.array([smp.C_prime_sigma.imag for smp in samples])
    abs_c = np.array([abs(smp.C) for smp in samples])
    abs_cp = np.array([abs(smp.C_prime) for smp in samples])

    sign_summary = {
        "im_C_start_positive": bool(im_c[0] > 0),
        "im_C_end_negative": bool(im_c[-1] < 0),
        "im_C_prime_start_negative": bool(im_cp[0] < 0),
        "im_C_prime_end_positive": bool(im_cp[-1] > 0),
        "im_C_sigma_all_negative": bool(np.all(im_cs < 0)),
        "im_C_prime_sigma_all_positive": bool(np.all(im_cps > 0)),
    }
    i_c = int(np.argmin(abs_c))
    i_cp = int(np.argmin(abs_cp))
    return CurveReport(sigma=sigma, samples=samples, sign_summary=sign_summary,
                       min_abs_C=float(abs_c[i_c]), argmin_C=float(s_grid[i_c]),
                       min_abs_C_prime=float(abs_cp[i_cp]),
                       argmin_C_prime=float(s_grid[i_cp]))


def sigma_sweep(t, sigmas, s_grid, cfg: QuadConfig | None = None):
    """Curve reports across a sigma grid, each tagged with the t context.

    Returns (reports, aggregate) where aggregate carries the two
    sweep-level claims: Im C_sigma bounded away from 0 from below and
    Im C'_sigma from above, across every (sigma, s) sampled.
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    t_val = None if t is None else float(t)
    reports = []
    for sigma in sigmas:
        rep = curve_eval(float(sigma), s_grid, cfg)
        if t_val is not None:
            rep = rep.with_t(t_val)
        reports.append(rep)
    min_abs_im_cs = min(min(abs(smp.C_sigma.imag) for smp in rep.samples)
                        for rep in reports)
    min_im_cps = min(min(smp.C_prime_sigma.imag for smp in rep.samples)
                     for rep in reports)
    aggregate = {
        "min_abs_im_C_sigma_positive": bool(min_abs_im_cs > 0.0),
        "min_im_C_prime_sigma_positive": bool(min_im_cps > 0.0),
        "min_abs_im_C_sigma": float(min_abs_im_cs),
        "min_im_C_prime_sigma": float(min_im_cps),
    }
    return reports, aggregate
