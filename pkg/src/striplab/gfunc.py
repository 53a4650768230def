"""The central strip function, its kernels, half-line split, and the
sigma-derivative.

Everything is organized around the Fourier form

    G(sigma + i t) = integral over R of kappa(sigma, y) e^{i t y} dy,
    kappa(sigma, y) = e^{sigma y} / (1 + exp(e^y)),

obtained from the Mellin-type form by x = e^y.  The kernel is analytic in
the horizontal strip |Im y| < pi/2 (nearest poles of 1/(1+exp(e^w)) sit at
w = ln((2k+1) pi) + i pi/2), which has two consequences we exploit:

* |G(sigma + i t)| decays like e^{-pi |t| / 2}, so for large |t| a direct
  real-axis quadrature loses all relative accuracy to cancellation;
* shifting the contour to Im y = c < pi/2 extracts the decay as the exact
  prefactor e^{-t c}, after which the remaining integral is O(1)-scaled
  and the trapezoid rule converges geometrically.

All large-|t| evaluations therefore run on a shifted contour whose height
approaches pi/2 as |t| grows.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import quadrule
from .errors import NonConvergence
from .quadrule import QuadConfig

__all__ = [
    "StripPoint",
    "KernelSide",
    "kappa",
    "kappa_side",
    "g_integral",
    "g_half",
    "g_sigma",
    "g_and_g_sigma",
    "functional_equation_residual",
    "decay_slope",
]

HALF_PI = math.pi / 2
_OVERFLOW = 700.0


@dataclass(frozen=True)
class StripPoint:
    """A point sigma + i t inside the open strip 0 < sigma < 1."""

    sigma: float
    t: float

    def __post_init__(self):
        if not 0.0 < self.sigma < 1.0:
            raise ValueError(f"sigma={self.sigma} outside the open strip (0, 1)")

    @property
    def z(self) -> complex:
        return complex(self.sigma, self.t)

    def conjugate(self) -> "StripPoint":
        return StripPoint(self.sigma, -self.t)


class KernelSide(enum.Enum):
    MINUS = "minus"
    PLUS = "plus"
    FULL = "full"


def _as_side(side) -> KernelSide:
    if isinstance(side, KernelSide):
        return side
    return KernelSide(str(side))


def _as_sigma_t(z) -> tuple[float, float]:
    if isinstance(z, StripPoint):
        return z.sigma, z.t
    z = complex(z)
    return z.real, z.imag


def kappa(sigma: float, y) -> np.ndarray | float:
    """Whole-line kernel e^{sigma y} / (1 + exp(e^y)).

    exp(e^y) is never formed beyond the overflow threshold: past it the
    doubly-exponential decay makes the value an exact 0 in doubles.
    """
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    ok = y < math.log(_OVERFLOW)
    ey = np.exp(y[ok])
    out[ok] = np.exp(sigma * y[ok]) / (1.0 + np.exp(ey))
    return out if out.ndim else float(out)


def kappa_side(sigma: float, y, side) -> np.ndarray | float:
    """One-sided kernels on y > 0 (exactly 0 for y < 0).

    minus: e^{-sigma y} / (1 + exp(e^{-y}));  plus: the restriction of
    the whole-line kernel.  kappa(sigma, -y) == kappa_minus(sigma, y).
    """
    side = _as_side(side)
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    pos = y > 0
    if side is KernelSide.MINUS:
        out[pos] = np.exp(-sigma * y[pos]) / (1.0 + np.exp(np.exp(-y[pos])))
    elif side is KernelSide.PLUS:
        ok = pos & (y < math.log(_OVERFLOW))
        out[ok] = np.exp(sigma * y[ok]) / (1.0 + np.exp(np.exp(y[ok])))
    else:
        raise ValueError("side must be minus or plus for the one-sided kernel")
    return out if out.ndim else float(out)


def _kappa_on_contour(sigma: float, y: np.ndarray, c: float) -> np.ndarray:
    """kappa(sigma, y + i c) for real y, |c| < pi/2."""
    w = y + 1j * c
    ew = np.exp(w)
    out = np.zeros(y.shape, dtype=complex)
    ok = ew.real <= _OVERFLOW
    out[ok] = np.exp(sigma * w[ok]) / (1.0 + np.exp(ew[ok]))
    return out


def _contour_params(sigma: float, t_ref: float):
    """Shift height, window and base step for the line quadrature, sized
    for frequencies up to t_ref."""
    at = abs(t_ref)
    if at < 4.0:
        c = 0.0
        delta = HALF_PI
    else:
        delta = min(0.35, max(0.06, 6.0 / at))
        c = HALF_PI - delta
    scale = math.exp(-delta * at) if c > 0.0 else 1.0
    lo = math.log(2.0 * sigma * 1e-18 * scale) / sigma
    hi = math.log(45.0 / math.cos(c)) + 1.0
    h0 = min(0.25, 2.0 * math.pi * delta /
             (41.0 + delta * at + math.log(1.0 / min(delta, 1.0)) + 1.0))
    return c, lo, hi, h0


def _fourier_bulk(sigma: float, ts: np.ndarray, cfg: QuadConfig,
                  y_weight: bool = False) -> np.ndarray:
    """Vectorized contour-shifted evaluation of G (or G_sigma when
    y_weight is set) at the points sigma + i ts.

    All ts must share a sign; the kernel, grid and contour are then shared
    across the whole batch, which is what makes boundary sweeps cheap.
    """
    ts = np.asarray(ts, dtype=float)
    if ts.size == 0:
        return np.zeros(0, dtype=complex)
    if np.any(ts > 0) and np.any(ts < 0):
        raise ValueError("bulk evaluation needs a single-signed t batch")
    sign = -1.0 if np.any(ts < 0) else 1.0
    t_ref = float(np.max(np.abs(ts)))
    c, lo, hi, h0 = _contour_params(sigma, t_ref)
    cc = c * sign
    # natural magnitude of the shifted integral at each t; convergence is
    # judged against it so that points sitting on a zero of G still stop
    delta = HALF_PI - c
    env = np.exp(-delta * np.abs(ts))

    def node_sums(y: np.ndarray):
        """sum over these nodes of kernel * e^{i t y} (unit weights), and
        the summed kernel magnitude."""
        kern = _kappa_on_contour(sigma, y, cc)
        if y_weight:
            kern = kern * (y + 1j * cc)
        out = np.empty(ts.size, dtype=complex)
        chunk = max(1, int(4e6 / max(y.size, 1)))
        for i in range(0, ts.size, chunk):
            sel = ts[i:i + chunk]
            out[i:i + chunk] = np.exp(1j * np.outer(sel, y)) @ kern
        return out, float(np.sum(np.abs(kern))), kern

    # trapezoid at step h, then S(h/2) = S(h)/2 + (h/2) sum over the new
    # midpoints, so each refinement only evaluates the nodes it adds
    n0 = int(math.ceil((hi - lo) / h0)) + 1
    h = (hi - lo) / (n0 - 1)
    y0 = lo + h * np.arange(n0)
    sums, mass, kern0 = node_sums(y0)
    ends = 0.5 * (kern0[0] + kern0[-1])
    ends_t = 0.5 * (kern0[0] * np.exp(1j * ts * lo)
                    + kern0[-1] * np.exp(1j * ts * hi))
    prev = (sums - ends_t) * h  # endpoints at half weight
    mass_acc = (mass - abs(ends)) * h
    cur = prev
    err = np.inf
    for level in range(1, cfg.max_level + 1):
        h *= 0.5
        y_new = lo + h + 2.0 * h * np.arange((n0 - 1) * 2 ** (level - 1))
        add, add_mass, _ = node_sums(y_new)
        cur = 0.5 * prev + h * add
        mass_acc = 0.5 * mass_acc + h * add_mass
        diff = np.abs(cur - prev)
        scale = np.maximum(np.abs(cur), env)
        err = float(np.max(diff / scale))
        # once consecutive levels differ by no more than the summation's
        # own roundoff, further refinement cannot help
        roundoff_floor = 8.0 * np.finfo(float).eps * mass_acc
        if err <= cfg.target_rel_tol / 8.0 or float(np.max(diff)) <= roundoff_floor:
            break
        prev = cur
    else:
        raise NonConvergence(
            f"contour quadrature stalled at sigma={sigma}, |t|<= {t_ref} "
            f"(relative spread {err:.2e})",
            value=cur, estimate=err)
    return cur * np.exp(-ts * cc)


def g_integral(z, method: str = "fourier", cfg: QuadConfig | None = None) -> complex:
    """The strip function: integral over (0, inf) of x^{z-1} / (e^x + 1).

    method "direct" integrates the Mellin form through the generic
    substitution engine (valid for any Re z > 0); method "fourier" uses
    the contour-shifted kernel transform, which keeps full relative
    accuracy for large |Im z| and is the default everywhere in the strip.
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    sigma, t = _as_sigma_t(z)
    if sigma <= 0:
        raise ValueError("need Re z > 0")
    if method == "direct":
        zc = complex(sigma, t)

        def integrand(x):
            ex = np.exp(-x)
            return np.exp((zc - 1.0) * np.log(x)) * ex / (1.0 + ex)

        value, _ = quadrule.integrate_semiinf(integrand, cfg)
        return value
    if method == "fourier":
        return complex(_fourier_bulk(sigma, np.array([t]), cfg)[0])
    raise ValueError(f"unknown method {method!r}")


def g_integral_err(z, method: str = "fourier",
                   cfg: QuadConfig | None = None) -> tuple[complex, float]:
    """Like :func:`g_integral` but returns (value, error_estimate).

    The direct engine propagates its refinement estimate; the contour
    path reports the configured relative target times the magnitude,
    which its own convergence loop enforced.
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    sigma, t = _as_sigma_t(z)
    if sigma <= 0:
        raise ValueError("need Re z > 0")
    if method == "direct":
        zc = complex(sigma, t)

        def integrand(x):
            ex = np.exp(-x)
            return np.exp((zc - 1.0) * np.log(x)) * ex / (1.0 + ex)

        return quadrule.integrate_semiinf(integrand, cfg)
    value = g_integral(z, method, cfg)
    return value, cfg.target_rel_tol * abs(value)


def g_bulk(sigma: float, ts, cfg: QuadConfig | None = None) -> np.ndarray:
    """Vectorized G(sigma + i t) for a single-signed batch of t values."""
    cfg = cfg or quadrule.DEFAULT_CONFIG
    ts = np.asarray(ts, dtype=float)
    if ts.size and np.any(ts > 0) and np.any(ts < 0):
        neg = ts < 0
        out = np.empty(ts.size, dtype=complex)
        out[~neg] = _fourier_bulk(sigma, ts[~neg], cfg)
        out[neg] = _fourier_bulk(sigma, ts[neg], cfg)
        return out
    return _fourier_bulk(sigma, ts, cfg)


def _half_y_max(sigma: float, im_t: float) -> float:
    """Cutoff for the minus-side envelope e^{(-sigma + Im t) y}."""
    rate = sigma - im_t
    if rate <= 1e-3:
        raise ValueError(
            f"minus-side transform diverges for Im t = {im_t} >= sigma = {sigma}")
    return 43.0 / rate


def g_half(z, side, cfg: QuadConfig | None = None, t_complex: complex | None = None) -> complex:
    """One-sided transforms G^- / G^+ of the kernels on (0, inf).

    G^-(sigma + i t) = integral kappa^-(sigma, y) e^{-i t y} dy and
    G^+(sigma + i t) = integral kappa^+(sigma, y) e^{+i t y} dy; their sum
    is the whole-line function.  `t_complex` replaces t to evaluate the
    analytic continuation in t (used by the transform-pair machinery).
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    side = _as_side(side)
    sigma, t = _as_sigma_t(z)
    tt = complex(t) if t_complex is None else complex(t_complex)
    if side is KernelSide.MINUS:
        phase = -1j * tt
        # envelope e^{-sigma y} * e^{Im(tt) y}: diverges unless Im tt < sigma
        y_max = _half_y_max(sigma, tt.imag)
        kern = lambda y: kappa_side(sigma, y, side) * np.exp(phase * y)
    elif side is KernelSide.PLUS:
        phase = 1j * tt
        # kappa^+ is an exact 0 past the overflow knee; decay of e^{ity}
        # for Im t > 0 shortens the window further
        y_max = math.log(_OVERFLOW) + 0.1
        if tt.imag > 0.0:
            y_max = min(y_max, 45.0 / tt.imag)
        kern = lambda y: kappa_side(sigma, y, side) * np.exp(phase * y)
    else:
        raise ValueError("side must be minus or plus")
    value, _ = quadrule.integrate_finite(kern, 0.0, y_max, cfg, osc_freq=abs(tt))
    return value


def g_half_bulk(sigma: float, ts, side, cfg: QuadConfig | None = None,
                y_weight: bool = False) -> np.ndarray:
    """Vectorized one-sided transform over a batch of real t values.

    With y_weight set this returns the sigma-derivatives
    -/+ integral y kappa^{-/+} e^{-/+ i t y} dy instead.
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    side = _as_side(side)
    ts = np.asarray(ts, dtype=float)
    omega = float(np.max(np.abs(ts))) if ts.size else 1.0
    if side is KernelSide.MINUS:
        y_max = _half_y_max(sigma, 0.0)
        sgn_phase = -1j
        deriv_sign = -1.0
    else:
        y_max = math.log(45.0 + omega) + 2.0
        sgn_phase = 1j
        deriv_sign = 1.0

    width = min(2.0, 9.0 / max(1.0, omega))
    n_panels = int(math.ceil(y_max / width))

    def panel_eval(edges: np.ndarray) -> np.ndarray:
        x, w = quadrule._gl(24)
        a, b = edges[:-1], edges[1:]
        mid = 0.5 * (a + b)[:, None]
        half = 0.5 * (b - a)[:, None]
        nodes = (mid + half * x[None, :]).ravel()
        weights = (half * w[None, :]).ravel()
        kern = kappa_side(sigma, nodes, side) * weights
        if y_weight:
            kern = kern * nodes * deriv_sign
        out = np.empty(ts.size, dtype=complex)
        chunk = max(1, int(4e6 / max(nodes.size, 1)))
        for i in range(0, ts.size, chunk):
            sel = ts[i:i + chunk]
            out[i:i + chunk] = np.exp(sgn_phase * np.outer(sel, nodes)) @ kern
        return out

    edges = np.linspace(0.0, y_max, n_panels + 1)
    coarse = panel_eval(edges)
    fine = panel_eval(quadrule._halve(edges))
    spread = float(np.max(np.abs(fine - coarse)))
    if spread > 1e-9 * max(float(np.max(np.abs(fine))), 1e-300):
        raise NonConvergence("half-line batch quadrature stalled",
                             value=fine, estimate=spread)
    return fine


def g_sigma(z, side=KernelSide.FULL, cfg: QuadConfig | None = None) -> complex:
    """d/dsigma of the strip function (equals its z-derivative), or of a
    single side, by analytic differentiation of the integrand."""
    cfg = cfg or quadrule.DEFAULT_CONFIG
    side = _as_side(side)
    sigma, t = _as_sigma_t(z)
    if side is KernelSide.FULL:
        return complex(_fourier_bulk(sigma, np.array([t]), cfg, y_weight=True)[0])
    return complex(g_half_bulk(sigma, np.array([t]), side, cfg, y_weight=True)[0])


def g_and_g_sigma(z, cfg: QuadConfig | None = None) -> tuple[complex, complex]:
    """G and G_sigma at one point (the Newton step pair)."""
    cfg = cfg or quadrule.DEFAULT_CONFIG
    sigma, t = _as_sigma_t(z)
    ts = np.array([t])
    g = complex(_fourier_bulk(sigma, ts, cfg)[0])
    gs = complex(_fourier_bulk(sigma, ts, cfg, y_weight=True)[0])
    return g, gs


def functional_equation_residual(z, cfg: QuadConfig | None = None) -> float:
    """Relative residual of the reflection identity

        pi^{-z/2} Gamma(1 - z/2) G(z) / (2 - 2^z)
            = pi^{-(1-z)/2} Gamma(1 - (1-z)/2) G(1-z) / (2 - 2^{1-z}).
    """
    from .specialfun import SingularFactor, gamma

    cfg = cfg or quadrule.DEFAULT_CONFIG
    sigma, t = _as_sigma_t(z)
    zc = complex(sigma, t)

    def half(w: complex) -> complex:
        den = 2.0 - cmath.exp(w * math.log(2.0))
        if abs(den) < 1e-12:
            raise SingularFactor(f"2 - 2^z vanishes near z={w}")
        pref = cmath.exp(-0.5 * w * math.log(math.pi)) / den
        return pref * gamma(1.0 - 0.5 * w) * g_integral(w, "fourier", cfg)

    lhs = half(zc)
    rhs = half(1.0 - zc)
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + 1e-300)


def decay_slope(sigma: float, t_lo: float, t_hi: float, n: int,
                cfg: QuadConfig | None = None) -> float:
    """Least-squares slope of log |G(sigma + i t)| over [t_lo, t_hi].

    The kernel's analyticity strip has half-width pi/2, so the expected
    slope is -pi/2 regardless of sigma.
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    ts = np.linspace(t_lo, t_hi, n)
    vals = g_bulk(sigma, ts, cfg)
    logs = np.log(np.abs(vals))
    return float(np.polyfit(ts, logs, 1)[0])
