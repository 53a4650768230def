"""Zero location in the strip: argument-principle counting over boxes,
Newton refinement, and the zero-equivalence / simplicity reports.

A note on scales.  |G| and |G_sigma| carry the envelope factor
w(z) = (1 - 2^(1-z)) Gamma(z), whose modulus decays like e^{-pi|t|/2};
at the third zero it is already ~1e-17.  Every threshold that is meant
to separate "zero" from "not zero" or "simple" from "suspicious" is
therefore applied to the envelope-normalized quantity G/w (numerically
the zeta scale, where the first zeros have |zeta'| ~ 0.8), not to raw
magnitudes that vanish for purely kinematic reasons.  Raw values are
still recorded on every report.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import curves, quadrule, specialfun
from .errors import (BoundaryTooCloseToZero, DerivativeUnderflow,
                     NoConvergence)
from .gfunc import StripPoint, g_and_g_sigma, g_bulk, g_integral
from .quadrule import QuadConfig

__all__ = [
    "SearchBox",
    "ZeroRecord",
    "winding_count",
    "refine_zero",
    "equivalence_check",
    "theorem510_suite",
    "zeta_zero_seeds",
    "scan_seeds",
]

#: acceptance thresholds, each a factor >= 10 looser than its inputs
ZERO_ABS_TOL = 1e-8
ON_LINE_TOL = 1e-9
NEWTON_STEP_TOL = 1e-12
SIMPLE_DERIV_TOL = 1e-3       # on |G_sigma / w|, the scale-free margin
MULTIPLICITY_DERIV_TOL = 1e-6
DERIV_UNDERFLOW_TOL = 1e-12
BOUNDARY_CLEARANCE = 1e-10    # on |G / w|


@dataclass(frozen=True)
class SearchBox:
    sigma_lo: float
    sigma_hi: float
    t_lo: float
    t_hi: float
    boundary_samples: int = 400

    def __post_init__(self):
        if not (0.0 < self.sigma_lo < self.sigma_hi < 1.0):
            raise ValueError("need 0 < sigma_lo < sigma_hi < 1")
        if not self.t_lo < self.t_hi:
            raise ValueError("need t_lo < t_hi")
        if self.boundary_samples < 16:
            raise ValueError("need at least 16 boundary samples")

    def inflate(self, factor: float) -> "SearchBox":
        ds = 0.5 * (self.sigma_hi - self.sigma_lo) * factor
        dt = 0.5 * (self.t_hi - self.t_lo) * factor
        return SearchBox(
            sigma_lo=max(self.sigma_lo - ds, 1e-3),
            sigma_hi=min(self.sigma_hi + ds, 1.0 - 1e-3),
            t_lo=self.t_lo - dt, t_hi=self.t_hi + dt,
            boundary_samples=self.boundary_samples)


@dataclass(frozen=True)
class ZeroRecord:
    z: StripPoint
    abs_G: float
    G_deriv: complex
    deriv_scaled: float
    multiplicity_estimate: int
    on_critical_line: bool
    zeta_residual: float
    curve_context: curves.CurveReport | None = None

    def with_curves(self, report: curves.CurveReport) -> "ZeroRecord":
        return replace(self, curve_context=report)


def _normalized(z: complex, g: complex) -> float:
    """|G / w| - the zeta-scale magnitude used for clearance checks."""
    return abs(g / specialfun.w_factor(z))


def _boundary_points(box: SearchBox):
    """Counterclockwise closed boundary: (parameter in [0,1), z) pairs."""
    # vertical edges are cheap (one batched evaluation per sigma), so they
    # take most of the budget; horizontal edges start coarse and rely on
    # the phase-jump bisection
    per_edge_t = max(16, int(0.4 * box.boundary_samples))
    per_edge_s = max(12, int(0.1 * box.boundary_samples))
    sig_up = np.linspace(box.sigma_lo, box.sigma_hi, per_edge_s, endpoint=False)
    t_up = np.linspace(box.t_lo, box.t_hi, per_edge_t, endpoint=False)
    sig_dn = np.linspace(box.sigma_hi, box.sigma_lo, per_edge_s, endpoint=False)
    t_dn = np.linspace(box.t_hi, box.t_lo, per_edge_t, endpoint=False)
    pts = []
    pts.extend(complex(s, box.t_lo) for s in sig_up)
    pts.extend(complex(box.sigma_hi, t) for t in t_up)
    pts.extend(complex(s, box.t_hi) for s in sig_dn)
    pts.extend(complex(box.sigma_lo, t) for t in t_dn)
    return pts


def _eval_boundary(pts, cfg) -> list[complex]:
    """G along the boundary; vertical runs share a bulk evaluation."""
    vals: list[complex] = [0j] * len(pts)
    by_sigma: dict[float, list[int]] = {}
    for i, z in enumerate(pts):
        by_sigma.setdefault(z.real, []).append(i)
    for sigma, idx in by_sigma.items():
        if len(idx) >= 4:
            tvals = np.array([pts[i].imag for i in idx])
            gv = g_bulk(sigma, tvals, cfg)
            for j, i in enumerate(idx):
                vals[i] = complex(gv[j])
        else:
            for i in idx:
                vals[i] = g_integral(pts[i], "fourier", cfg)
    return vals


def _relaxed(cfg: QuadConfig) -> QuadConfig:
    """Phase tracking and scanning need ~1e-6, not the full target; a
    relaxed copy of the config saves refinement levels on every boundary
    evaluation."""
    return replace(cfg, target_rel_tol=max(cfg.target_rel_tol, 1e-9))


def winding_count(box: SearchBox, cfg: QuadConfig | None = None) -> int:
    """(1/2 pi) times the total argument change of G around the box,
    with segment bisection until every phase jump is below pi/2."""
    cfg = _relaxed(cfg or quadrule.DEFAULT_CONFIG)
    current = box
    for attempt in range(4):
        pts = _boundary_points(current)
        vals = _eval_boundary(pts, cfg)
        clearance = min(_normalized(z, g) for z, g in zip(pts, vals))
        if clearance > BOUNDARY_CLEARANCE:
            break
        if attempt == 3:
            raise BoundaryTooCloseToZero(
                f"boundary clearance {clearance:.2e} after 3 re-inflations")
        current = current.inflate(0.04)
    pts.append(pts[0])
    vals.append(vals[0])

    total = 0.0
    for i in range(len(pts) - 1):
        total += _segment_phase(pts[i], pts[i + 1], vals[i], vals[i + 1],
                                cfg, depth=0)
    count = total / (2.0 * math.pi)
    nearest = round(count)
    if abs(count - nearest) > 0.25:
        raise NoConvergence(
            f"winding sum {count:.3f} did not settle near an integer")
    return int(nearest)


def _segment_phase(z0, z1, g0, g1, cfg, depth) -> float:
    dphi = cmath.phase(g1 / g0)
    if abs(dphi) < math.pi / 2:
        return dphi
    if depth >= 40:
        raise NoConvergence(
            f"phase jump {dphi:.2f} persisted after 40 bisections near {z0}")
    zm = 0.5 * (z0 + z1)
    gm = g_integral(zm, "fourier", cfg)
    return (_segment_phase(z0, zm, g0, gm, cfg, depth + 1)
            + _segment_phase(zm, z1, gm, g1, cfg, depth + 1))


def _multiplicity_by_winding(z0: complex, cfg, radius: float = 1e-4) -> int:
    angles = np.linspace(0.0, 2.0 * math.pi, 33)
    total = 0.0
    vals = [g_integral(z0 + radius * cmath.exp(1j * a), "fourier", cfg)
            for a in angles[:-1]]
    vals.append(vals[0])
    pts = [z0 + radius * cmath.exp(1j * a) for a in angles]
    for i in range(len(vals) - 1):
        total += _segment_phase(pts[i], pts[i + 1], vals[i], vals[i + 1],
                                cfg, depth=30)
    return int(round(total / (2.0 * math.pi)))


def refine_zero(z0, cfg: QuadConfig | None = None) -> ZeroRecord:
    """Newton iteration z <- z - G/G_sigma from a rough seed.

    The derivative used is the analytic sigma-derivative (the z-derivative
    of the analytic function).  Simplicity is certified on the
    envelope-normalized derivative |G_sigma / w|; the raw derivative is
    recorded in the result.
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    if isinstance(z0, StripPoint):
        z = z0.z
    else:
        z = complex(z0)
    g = gs = 0j
    for _ in range(50):
        g, gs = g_and_g_sigma(z, cfg)
        if gs == 0:
            raise NoConvergence(f"vanishing derivative at {z}")
        step = g / gs
        z = z - step
        if not 0.0 < z.real < 1.0:
            raise NoConvergence(f"Newton left the strip at {z}")
        if abs(step) < NEWTON_STEP_TOL:
            break
    else:
        raise NoConvergence(f"Newton did not converge from {z0}")

    g, gs = g_and_g_sigma(z, cfg)
    abs_g = abs(g)
    if abs_g > ZERO_ABS_TOL:
        raise NoConvergence(
            f"converged point {z} is not a zero (|G| = {abs_g:.2e})")
    w = specialfun.w_factor(z)
    deriv_scaled = abs(gs / w)
    if deriv_scaled < DERIV_UNDERFLOW_TOL:
        raise DerivativeUnderflow(
            f"normalized derivative {deriv_scaled:.2e} at {z}: simplicity "
            "in doubt, inconsistent with every observed zero so far")
    if deriv_scaled > MULTIPLICITY_DERIV_TOL:
        multiplicity = 1
    else:
        multiplicity = _multiplicity_by_winding(z, cfg)
    zr = abs(specialfun.zeta_reference(z))
    return ZeroRecord(
        z=StripPoint(z.real, z.imag),
        abs_G=abs_g,
        G_deriv=gs,
        deriv_scaled=deriv_scaled,
        multiplicity_estimate=multiplicity,
        on_critical_line=abs(z.real - 0.5) < ON_LINE_TOL,
        zeta_residual=zr)


def equivalence_check(rec, cfg: QuadConfig | None = None) -> dict:
    """Report on the zero-transfer mechanism at a point.

    Accepts a ZeroRecord or a bare point.  The transfer factor
    w = (1 - 2^(1-z)) Gamma(z) never vanishes in the strip; the part that
    could conceivably degenerate is the eta factor 1 - 2^(1-z), so the
    report checks it is bounded away from 0 and records |w| itself
    (which is exponentially small in |t| purely through Gamma).
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    if isinstance(rec, ZeroRecord):
        z = rec.z.z
        abs_g = rec.abs_G
        zr = rec.zeta_residual
    else:
        z = rec.z if isinstance(rec, StripPoint) else complex(rec)
        abs_g = abs(g_integral(z, "fourier", cfg))
        zr = abs(specialfun.zeta_reference(z))
    eta_factor = abs(1.0 - cmath.exp((1.0 - z) * math.log(2.0)))
    w_abs = abs(specialfun.w_factor(z))
    normalized = abs_g / w_abs
    return {
        "z": z,
        "abs_G": abs_g,
        "normalized_G": normalized,
        "is_zero": abs_g < ZERO_ABS_TOL and normalized < 1e-7,
        "zeta_residual": zr,
        "zeta_residual_ok": zr < 1e-7,
        "eta_factor_abs": eta_factor,
        "transfer_nonvanishing": eta_factor > 1e-3,
        "w_abs": w_abs,
    }


def zeta_zero_seeds(t_max: float, cfg: QuadConfig | None = None,
                    step: float = 0.2) -> list[complex]:
    """Seed points from the series oracle alone: local minima of
    |zeta(1/2 + i t)| refined by a parabolic step.  Independent of every
    quadrature path."""
    ts = np.arange(1.0, t_max, step)
    vals = np.array([abs(specialfun.zeta_reference(complex(0.5, t)))
                     for t in ts])
    seeds = []
    for i in range(1, len(ts) - 1):
        if vals[i] < vals[i - 1] and vals[i] < vals[i + 1] and vals[i] < 1.0:
            denom = vals[i - 1] - 2 * vals[i] + vals[i + 1]
            shift = 0.5 * (vals[i - 1] - vals[i + 1]) / denom if denom else 0.0
            seeds.append(complex(0.5, ts[i] + shift * step))
    return seeds


def scan_seeds(box: SearchBox, cfg: QuadConfig | None = None,
               n_sigma: int = 9, n_t: int = 25) -> list[complex]:
    """Grid scan of |G/w| over a box; minima below 0.5 become seeds.
    Runs without assuming anything about where zeros should lie."""
    cfg = _relaxed(cfg or quadrule.DEFAULT_CONFIG)
    sigmas = np.linspace(box.sigma_lo, box.sigma_hi, n_sigma)
    ts = np.linspace(box.t_lo, box.t_hi, n_t)
    norm = np.empty((n_sigma, n_t))
    for i, s in enumerate(sigmas):
        gv = g_bulk(s, ts, cfg)
        wv = np.array([specialfun.w_factor(complex(s, t)) for t in ts])
        norm[i] = np.abs(gv / wv)
    seeds = []
    for i in range(n_sigma):
        for j in range(1, n_t - 1):
            if (norm[i, j] < 0.5 and norm[i, j] <= norm[i, j - 1]
                    and norm[i, j] <= norm[i, j + 1]):
                seeds.append(complex(sigmas[i], ts[j]))
    return seeds


def _dedupe(records: list[ZeroRecord], tol: float = 1e-6) -> list[ZeroRecord]:
    out: list[ZeroRecord] = []
    for rec in sorted(records, key=lambda r: (r.z.t, r.z.sigma)):
        if not any(abs(rec.z.z - kept.z.z) < tol for kept in out):
            out.append(rec)
    return out


def theorem510_suite(t_max: float, cfg: QuadConfig | None = None,
                     sigma_margin: float = 0.05, tile_dt: float = 5.0,
                     with_curves: bool = True) -> dict:
    """Count and refine every zero with 0 < t <= t_max, then check the
    on-line and simplicity claims.

    Seeds come from both the series oracle and an independent box scan;
    winding counts over a box tiling are the ground truth for how many
    zeros must be found.  Any mismatch or failed claim lands in the
    `discrepancies` list of the summary rather than raising.
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    if t_max > 60.0:
        raise ValueError("t_max <= 60 (validated oracle range)")
    boxes = []
    t0 = 0.0
    while t0 < t_max:
        t1 = min(t0 + tile_dt, t_max)
        boxes.append(SearchBox(sigma_margin, 1.0 - sigma_margin, t0, t1))
        t0 = t1

    box_counts = [(box, winding_count(box, cfg)) for box in boxes]
    total_winding = sum(c for _, c in box_counts)

    seeds = zeta_zero_seeds(t_max, cfg)
    for box, count in box_counts:
        if count > 0:
            seeds.extend(scan_seeds(box, cfg))

    records = []
    failures = []
    for seed in seeds:
        try:
            rec = refine_zero(seed, cfg)
        except (NoConvergence, DerivativeUnderflow) as exc:
            failures.append(f"seed {seed}: {exc}")
            continue
        if 0.0 < rec.z.t <= t_max:
            records.append(rec)
    records = _dedupe(records)

    discrepancies = []
    if len(records) != total_winding:
        discrepancies.append(
            f"winding total {total_winding} != {len(records)} refined zeros")
    for box, count in box_counts:
        inside = [r for r in records
                  if box.t_lo < r.z.t <= box.t_hi
                  and box.sigma_lo < r.z.sigma < box.sigma_hi]
        if len(inside) != count:
            discrepancies.append(
                f"box t in ({box.t_lo}, {box.t_hi}]: winding {count} but "
                f"{len(inside)} refined zeros")
    for rec in records:
        if not rec.on_critical_line:
            discrepancies.append(
                f"zero at t={rec.z.t:.6f} off the half line: sigma={rec.z.sigma!r}")
        if rec.multiplicity_estimate != 1:
            discrepancies.append(
                f"zero at t={rec.z.t:.6f} multiplicity "
                f"{rec.multiplicity_estimate}")
        if rec.deriv_scaled <= SIMPLE_DERIV_TOL:
            discrepancies.append(
                f"zero at t={rec.z.t:.6f}: normalized derivative "
                f"{rec.deriv_scaled:.2e} below the simplicity margin")

    curve_aggregate = None
    if with_curves and records:
        report = curves.curve_eval(0.5, np.linspace(0.0, 1.0, 101), cfg)
        records = [rec.with_curves(report.with_t(rec.z.t)) for rec in records]
        curve_aggregate = report.sign_summary

    return {
        "t_max": t_max,
        "boxes": [((b.sigma_lo, b.sigma_hi, b.t_lo, b.t_hi), c)
                  for b, c in box_counts],
        "total_winding": total_winding,
        "records": records,
        "n_zeros": len(records),
        "all_on_line": all(r.on_critical_line for r in records),
        "all_simple": all(r.multiplicity_estimate == 1 for r in records),
        "seed_failures": failures,
        "discrepancies": discrepancies,
        "curve_sign_summary": curve_aggregate,
    }
