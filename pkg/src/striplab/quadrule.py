"""Quadrature engines used throughout the package.

Two families of rules are provided:

* truncated uniform (trapezoid) rules on a finite window, refined by
  halving the step.  For integrands that are analytic in a strip around
  the contour and decay at the window ends these converge geometrically,
  which is what every whole-line Fourier-type integral here relies on.
* composite Gauss-Legendre panels for finite and semi-infinite ranges,
  with panel widths capped by the local oscillation frequency and an
  optional graded refinement around a near-axis pole.

Semi-infinite integrals over (0, inf) are computed after the substitution
x = e^y, so a single whole-line engine serves both the Mellin-type and the
Fourier-type forms.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NonConvergence, TruncationWarning

__all__ = [
    "QuadConfig",
    "QuadratureRule",
    "uniform_rule",
    "integrate_line",
    "integrate_semiinf",
    "integrate_finite",
    "integrate_halfline",
]


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances and truncation defaults for the quadrature engines.

    ``delta_limit`` is not used by any computation; it documents the
    analytic regularization limit that the operator crosscheck in
    :mod:`striplab.intops` deliberately does *not* discretize.
    """

    target_rel_tol: float = 1e-12
    max_level: int = 12
    fourier_truncation_L: float = 80.0
    delta_limit: float = 1e-6

    def __post_init__(self):
        if self.target_rel_tol <= 0:
            raise ValueError("target_rel_tol must be positive")
        if self.fourier_truncation_L <= 0:
            raise ValueError("fourier_truncation_L must be positive")


DEFAULT_CONFIG = QuadConfig()


@dataclass(frozen=True)
class QuadratureRule:
    """A concrete rule: nodes, positive weights and the truncation window."""

    nodes: np.ndarray
    weights: np.ndarray
    truncation: tuple[float, float]
    level: int = 0

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.shape != weights.shape:
            raise ValueError("nodes and weights must have matching shapes")
        if np.any(weights <= 0):
            raise ValueError("weights must all be positive")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        lo, hi = self.truncation
        if nodes.size and (nodes[0] < lo - 1e-12 or nodes[-1] > hi + 1e-12):
            raise ValueError("nodes must lie within the truncation window")

    def apply(self, f) -> complex:
        return complex(np.sum(self.weights * _eval_on(f, self.nodes)))


def uniform_rule(lo: float, hi: float, level: int = 0, base_n: int = 64) -> QuadratureRule:
    """Trapezoid rule on [lo, hi] with base_n * 2**level panels."""
    if hi <= lo:
        raise ValueError("window must have positive length")
    n = base_n * 2 ** level + 1
    nodes = np.linspace(lo, hi, n)
    h = (hi - lo) / (n - 1)
    weights = np.full(n, h)
    weights[0] = weights[-1] = h / 2
    return QuadratureRule(nodes=nodes, weights=weights, truncation=(lo, hi), level=level)


def _eval_on(f, x: np.ndarray) -> np.ndarray:
    """Evaluate f on an array of nodes, falling back to a scalar map."""
    try:
        out = np.asarray(f(x))
        if out.shape == x.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.asarray([f(v) for v in x])


def _refine_uniform(f, lo, hi, cfg, base_h):
    """Level refinement of the trapezoid rule until the consecutive-level
    difference meets the tolerance (with a safety factor, since the
    difference underestimates the error close to convergence).  Stops
    early once the difference falls below the summation's own roundoff,
    which is the natural floor for cancelling integrands."""
    base_n = max(16, int(np.ceil((hi - lo) / base_h)))
    prev = uniform_rule(lo, hi, 0, base_n).apply(f)
    cur = prev
    err = abs(prev)
    for level in range(1, cfg.max_level + 1):
        rule = uniform_rule(lo, hi, level, base_n)
        fvals = np.asarray(_eval_on(f, rule.nodes))
        cur = complex(np.sum(rule.weights * fvals))
        mass = float(np.sum(rule.weights * np.abs(fvals)))
        err = abs(cur - prev)
        scale = max(abs(cur), 1e-300)
        floor = 8.0 * np.finfo(float).eps * mass
        if err <= cfg.target_rel_tol * scale / 8.0 or err <= floor:
            return cur, err, level
        prev = cur
    raise NonConvergence(
        f"no convergence at max_level={cfg.max_level} (estimate {err:.3e})",
        value=cur,
        estimate=err,
    )


def integrate_line(
    f: Callable,
    cfg: QuadConfig | None = None,
    lo: float | None = None,
    hi: float | None = None,
    base_h: float = 0.25,
) -> tuple[complex, float]:
    """Integrate f over the real line, truncated to [lo, hi].

    The window defaults to +/- cfg.fourier_truncation_L.  Emits
    :class:`TruncationWarning` when the integrand has not decayed at the
    window ends, and raises :class:`NonConvergence` when level refinement
    stalls.  Returns ``(value, error_estimate)``.
    """
    cfg = cfg or DEFAULT_CONFIG
    if lo is None:
        lo = -cfg.fourier_truncation_L
    if hi is None:
        hi = cfg.fourier_truncation_L
    value, err, _ = _refine_uniform(f, lo, hi, cfg, base_h)

    ends = np.abs(_eval_on(f, np.array([lo, hi])))
    # cheap interior probe for the magnitude scale
    probe = np.abs(_eval_on(f, np.linspace(lo, hi, 33)))
    fmax = max(float(np.max(probe)), 1e-300)
    if np.any(ends > 1e-15 * fmax):
        warnings.warn(
            f"integrand not negligible at truncation endpoints "
            f"(|f(ends)|/max|f| = {float(np.max(ends)) / fmax:.2e})",
            TruncationWarning,
            stacklevel=2,
        )
    return value, err


def _scan_window(g, step: float = 1.0, drop: float = 1e-19,
                 u_min: float = -700.0, u_max: float = 120.0):
    """Find a window [lo, hi] outside which |g| has decayed below
    drop * max|g|.  Probes on a unit grid expanding from 0."""
    g0 = abs(complex(np.asarray(g(np.array([0.0])))[0]))
    gmax = g0
    lo = hi = 0.0
    # expand right
    consec = 0
    u = 0.0
    while u < u_max:
        u += step
        val = abs(complex(np.asarray(g(np.array([u])))[0]))
        gmax = max(gmax, val)
        if val < drop * max(gmax, 1e-300):
            consec += 1
            if consec >= 2:
                hi = u
                break
        else:
            consec = 0
    else:
        hi = u_max
    # expand left
    consec = 0
    u = 0.0
    while u > u_min:
        u -= step
        val = abs(complex(np.asarray(g(np.array([u])))[0]))
        gmax = max(gmax, val)
        if val < drop * max(gmax, 1e-300):
            consec += 1
            if consec >= 2:
                lo = u
                break
        else:
            consec = 0
    else:
        lo = u_min
    return lo, hi, gmax


def integrate_semiinf(f: Callable, cfg: QuadConfig | None = None,
                      base_h: float = 0.25) -> tuple[complex, float]:
    """Integrate f over (0, inf) via the substitution x = e^y.

    After the substitution the integrand g(y) = f(e^y) e^y decays
    (double-)exponentially for the kernels of interest, so the whole-line
    trapezoid engine applies.  Returns ``(value, error_estimate)``.
    """
    cfg = cfg or DEFAULT_CONFIG

    def g(y):
        x = np.exp(y)
        return np.asarray(_eval_on(f, x)) * x

    lo, hi, gmax = _scan_window(g)
    if gmax == 0.0:
        return 0.0 + 0.0j, 0.0
    # pad one scan step so the trapezoid sees the decayed tail
    value, err, _ = _refine_uniform(g, lo - 1.0, hi + 1.0, cfg, base_h)
    return value, err


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(order: int):
    if order not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(order)
        _GL_CACHE[order] = (x, w)
    return _GL_CACHE[order]


def _panel_sum(f, edges: np.ndarray, order: int) -> complex:
    x, w = _gl(order)
    a = edges[:-1]
    b = edges[1:]
    mid = 0.5 * (a + b)[:, None]
    half = 0.5 * (b - a)[:, None]
    nodes = (mid + half * x[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return complex(np.sum(weights * _eval_on(f, nodes)))


def _halve(edges: np.ndarray) -> np.ndarray:
    return np.sort(np.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))


def _integrate_panels(f, edges, cfg, order=24):
    """Composite Gauss-Legendre over the given panel edges, with nested
    panel halvings at the same order as the error estimate."""
    prev = _panel_sum(f, edges, order)
    tols = (max(cfg.target_rel_tol, 1e-14),
            max(cfg.target_rel_tol, 1e-13),
            max(cfg.target_rel_tol, 1e-12))
    err = abs(prev)
    for tol in tols:
        edges = _halve(edges)
        cur = _panel_sum(f, edges, order)
        err = abs(cur - prev)
        if err <= tol * max(abs(cur), 1e-300):
            return cur, err
        prev = cur
    raise NonConvergence(
        f"panel quadrature stalled (estimate {err:.3e})", value=prev,
        estimate=err)


def _graded_edges(a: float, b: float, point: float, width: float) -> np.ndarray:
    """Panel edges on [a, b] geometrically refined toward `point`."""
    width = max(width, 1e-13 * max(1.0, abs(point)))
    edges = {a, b}
    for sgn in (-1.0, 1.0):
        d = width
        while True:
            e = point + sgn * d
            if a < e < b:
                edges.add(e)
            d *= 2.0
            if d > (b - a) * 2:
                break
    if a < point < b:
        edges.add(point)
    return np.array(sorted(edges))


def integrate_finite(
    f: Callable,
    a: float,
    b: float,
    cfg: QuadConfig | None = None,
    osc_freq: float = 0.0,
    feature: tuple[float, float] | None = None,
) -> tuple[complex, float]:
    """Gauss-Legendre panel integration of f over [a, b].

    ``osc_freq`` caps the panel width so oscillations like e^{i osc y} are
    resolved; ``feature=(y0, w0)`` grades panels toward a sharp feature of
    width w0 at y0 (a near-axis pole, say).
    """
    cfg = cfg or DEFAULT_CONFIG
    if b <= a:
        return 0.0 + 0.0j, 0.0
    cap = min(b - a, 9.0 / max(1.0, abs(osc_freq)))
    n_panels = int(np.ceil((b - a) / cap))
    edges = np.linspace(a, b, n_panels + 1)
    if feature is not None:
        y0, w0 = feature
        edges = np.sort(np.unique(np.concatenate([edges, _graded_edges(a, b, y0, w0)])))
    return _integrate_panels(f, edges, cfg)


def integrate_halfline(
    f: Callable,
    cfg: QuadConfig | None = None,
    osc_freq: float = 0.0,
    y_max: float | None = None,
    feature: tuple[float, float] | None = None,
) -> tuple[complex, float]:
    """Integrate f over (0, inf) with Gauss-Legendre panels.

    Intended for kernels that decay along the positive axis while
    oscillating at a bounded frequency.  The cutoff is detected by probing
    |f| on a geometric grid unless ``y_max`` is given.
    """
    cfg = cfg or DEFAULT_CONFIG
    if y_max is None:
        y_max = _detect_cutoff(f, osc_freq)
    if y_max <= 0:
        return 0.0 + 0.0j, 0.0
    return integrate_finite(f, 0.0, y_max, cfg, osc_freq=osc_freq, feature=feature)


def _detect_cutoff(f, osc_freq: float) -> float:
    shift = 0.37 / max(1.0, abs(osc_freq))  # dodge zeros of the oscillation
    y = 1.0
    fmax = 0.0
    cutoff = 0.0
    for _ in range(60):
        probe = np.abs(_eval_on(f, np.array([y, y + shift])))
        val = float(np.max(probe))
        fmax = max(fmax, val)
        if fmax > 0 and val < 1e-18 * fmax:
            cutoff = y
            break
        y *= 1.5
    else:
        cutoff = y
    return cutoff
