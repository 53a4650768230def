"""The verification suite: every acceptance check, its tolerance, and a
machine-readable report.

Each check produces one or more entries {id, claim, status, measured,
tolerance}; status is "pass", "fail", or "diagnostic" (a reported
observation that the suite does not gate on, used for the contested
sign claims of the curve machinery and for scale-degenerate raw
magnitudes).  Timings are kept out of the report document so that
repeated runs are byte-identical; they are returned separately.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import curves, gfunc, intops, opconv, quadrule, specialfun, zerofind
from .gfunc import KernelSide
from .quadrule import QuadConfig

__all__ = ["CheckResult", "run_suite", "report_document", "SUITE_NAMES"]

LN2 = math.log(2.0)

#: reference zero ordinates, frozen from the series oracle ahead of the
#: quadrature build (Newton on eta alone reproduces them to 1e-12)
ZERO_ORDINATES_30 = (14.134725141734694, 21.022039638771555, 25.010857580145688)


@dataclass
class CheckResult:
    id: str
    claim: str
    status: str
    measured: object
    tolerance: object

    def as_dict(self) -> dict:
        return {"id": self.id, "claim": self.claim, "status": self.status,
                "measured": self.measured, "tolerance": self.tolerance}


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


class _Context:
    """Shared lazily-computed data used by several checks."""

    def __init__(self, cfg: QuadConfig):
        self.cfg = cfg
        self._grid = None
        self._zero_suite = None

    @property
    def grid(self):
        if self._grid is None:
            sigmas = np.linspace(0.2, 0.8, 7)
            ts = np.linspace(0.0, 40.0, 7)
            g_plus = {s: gfunc.g_bulk(s, ts, self.cfg) for s in sigmas}
            g_minus = {s: gfunc.g_bulk(s, -ts, self.cfg) for s in sigmas}
            self._grid = (sigmas, ts, g_plus, g_minus)
        return self._grid

    @property
    def zero_suite(self):
        if self._zero_suite is None:
            self._zero_suite = zerofind.theorem510_suite(30.0, self.cfg)
        return self._zero_suite


def check_closed_forms(ctx: _Context):
    cfg = ctx.cfg
    g1 = gfunc.g_integral(1.0, "direct", cfg)
    g2 = gfunc.g_integral(2.0, "direct", cfg)
    e1 = abs(g1 - LN2)
    e2 = abs(g2 - math.pi ** 2 / 12.0)
    ok = e1 < 1e-11 and e2 < 1e-11
    return [CheckResult(
        "c01_closed_forms",
        "value at 1 equals log 2 and value at 2 equals pi^2/12",
        _status(ok), {"err_at_1": e1, "err_at_2": e2}, 1e-11)]


def check_zeta_relation(ctx: _Context):
    sigmas, ts, g_plus, _ = ctx.grid
    worst = 0.0
    for s in sigmas:
        for j, t in enumerate(ts):
            z = complex(s, t)
            ref = specialfun.w_factor(z) * specialfun.zeta_reference(z)
            worst = max(worst, abs(g_plus[s][j] - ref) / abs(g_plus[s][j]))
    return [CheckResult(
        "c02_zeta_relation",
        "integral equals (1 - 2^(1-z)) Gamma(z) zeta(z) on a 7x7 strip grid",
        _status(worst < 1e-10), worst, 1e-10)]


def check_functional_equation(ctx: _Context):
    cfg = ctx.cfg
    worst = 0.0
    for s in (0.25, 0.375, 0.5, 0.625, 0.75):
        for t in (2.0, 9.0, 16.0, 23.0, 30.0):
            worst = max(worst, gfunc.functional_equation_residual(
                complex(s, t), cfg))
    return [CheckResult(
        "c03_functional_equation",
        "reflection identity relative residual at 25 strip points",
        _status(worst < 1e-9), worst, 1e-9)]


def check_schwarz(ctx: _Context):
    sigmas, ts, g_plus, g_minus = ctx.grid
    worst = 0.0
    for s in sigmas:
        worst = max(worst, float(np.max(np.abs(
            g_minus[s] - np.conj(g_plus[s])))))
    return [CheckResult(
        "c04_schwarz_reflection",
        "value at conjugate point equals conjugate value on the grid",
        _status(worst < 1e-12), worst, 1e-12)]


def check_split(ctx: _Context):
    cfg = ctx.cfg
    sigmas, ts, g_plus, _ = ctx.grid
    worst = 0.0
    for s in sigmas:
        gm = gfunc.g_half_bulk(s, ts, KernelSide.MINUS, cfg)
        gp = gfunc.g_half_bulk(s, ts, KernelSide.PLUS, cfg)
        worst = max(worst, float(np.max(np.abs(g_plus[s] - (gm + gp)))))
    return [CheckResult(
        "c05_half_split",
        "one-sided transforms sum to the whole-line value on the grid",
        _status(worst < 1e-10), worst, 1e-10)]


def check_decay(ctx: _Context):
    slope = gfunc.decay_slope(0.5, 20.0, 60.0, 41, ctx.cfg)
    dev = abs(slope + math.pi / 2) / (math.pi / 2)
    return [CheckResult(
        "c06_decay_rate",
        "log-magnitude slope on the half line over t in [20, 60] is -pi/2",
        _status(dev < 0.05), {"slope": slope, "relative_deviation": dev},
        "5% of pi/2")]


def check_norm(ctx: _Context):
    bound = 1.0 / math.sqrt(2.0) + 1e-12
    norms = {}
    ok = True
    for n in (16, 32, 64, 128, 256, 512):
        v = intops.operator_norm(intops.build_J("Jplus", "trapezoid", 1.0, n))
        norms[str(n)] = v
        ok = ok and v <= bound
    ref_err = abs(norms["512"] - 0.63662)
    ok = ok and ref_err <= 1e-3
    return [CheckResult(
        "c07_operator_norm",
        "norm bounded by beta/sqrt(2) for n in 16..512 and equal to "
        "0.63662 (refinement value, = 2/pi) at n=512",
        _status(ok), {"norms": norms, "err_at_512": ref_err},
        {"bound": bound, "n512": 1e-3})]


def check_fov(ctx: _Context):
    jp = intops.build_J("Jplus", "trapezoid", 1.0, 128)
    jm = intops.build_J("Jminus", "trapezoid", 1.0, 128)
    fp = intops.field_of_values(jp, 360)
    fm = intops.field_of_values(jm, 360)
    eig_p = np.linalg.eigvals(intops._weighted_similarity(jp.matrix, jp.weights))
    eig_m = np.linalg.eigvals(intops._weighted_similarity(jm.matrix, jm.weights))
    ok = (fp.min_real() >= -1e-12
          and fp.contains(fp.rayleigh_samples, 1e-8)
          and fm.contains(fm.rayleigh_samples, 1e-8)
          and fp.contains(eig_p, 1e-8) and fm.contains(eig_m, 1e-8))
    out = [CheckResult(
        "c08_field_of_values",
        "numerical range of the forward operator in the closed right half "
        "plane; Rayleigh samples and eigenvalues of both operators inside "
        "their traced boundaries",
        _status(ok),
        {"min_re_plus": fp.min_real()},
        {"half_plane": 1e-12, "containment": 1e-8})]

    # The stated left-half-plane containment for the backward operator
    # cannot hold: with (J- g)(t) = int_t^beta g one has
    # Re (J- g, g) = (1/2) |int_0^beta g|^2 >= 0 (J- is the adjoint of
    # J+), so its range is the conjugate of the forward range.  The
    # literal check is kept and its failure recorded as a finding; the
    # companion entry verifies the actual (mirror) relation.
    out.append(CheckResult(
        "c08_minus_half_plane",
        "backward-operator range in the closed left half plane as stated; "
        "unattainable, since the backward operator is the forward one's "
        "adjoint and Re (J- g, g) = (1/2)|int g|^2 >= 0 (recorded finding)",
        _status(fm.max_real() <= 1e-12), {"max_re_minus": fm.max_real()},
        1e-12))
    mirror_gap = float(np.max(np.abs(
        np.sort_complex(fm.support_points)
        - np.sort_complex(np.conj(fp.support_points)))))
    out.append(CheckResult(
        "c08d_adjoint_mirror",
        "backward range equals the conjugate of the forward range (the "
        "relation that actually holds) and stays in the right half plane",
        "diagnostic",
        {"min_re_minus": fm.min_real(), "support_mirror_gap": mirror_gap},
        None))
    return out


def check_re_identity(ctx: _Context):
    jp = intops.build_J("Jplus", "trapezoid", 1.0, 64)
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(20):
        g = rng.normal(size=64)
        r = intops.rayleigh(jp, g)
        expected = 0.5 * abs(np.sum(jp.weights * g)) ** 2 / np.sum(
            jp.weights * g ** 2)
        worst = max(worst, abs(r.real - expected))
    return [CheckResult(
        "c09_real_part_identity",
        "Re (J+ g, g) equals half the squared weighted sum for real g",
        _status(worst < 1e-10), worst, 1e-10)]


def check_theorem35(ctx: _Context):
    cfg = ctx.cfg
    r = intops.theorem35_ab(lambda y: np.exp(-y), cfg)
    e_a = abs(r.a + math.pi / 4.0)
    e_b = abs(r.b - 0.5)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lhs, rhs, residual = intops.theorem35_crosscheck(
            lambda y: np.exp(-y), 200.0, 4096, cfg)
    ok = e_a < 1e-10 and e_b < 1e-10 and residual < 1e-3
    out = [CheckResult(
        "c10_range_number_pair",
        "quadrature (a, b) for the unit exponential kernel equals "
        "(-pi/4, 1/2); sampled crosscheck reproduces b within 1e-3",
        _status(ok),
        {"err_a": e_a, "err_b": e_b, "crosscheck_b_residual": residual},
        {"quadrature": 1e-10, "crosscheck_b": 1e-3})]
    out.append(CheckResult(
        "c10d_crosscheck_real_part",
        "sampled real part against the analytic limit value a "
        "(observational; the limit is not discretized)",
        "diagnostic",
        {"re_lhs": lhs.real, "a": rhs.real, "gap": abs(lhs.real - rhs.real)},
        None))
    return out


def check_monomial(ctx: _Context):
    jp = intops.build_J("Jplus", "trapezoid", 1.0, 64)
    errs = {str(n): opconv.monomial_identity(n, jp) for n in (1, 2, 3, 4)}
    worst = max(errs.values())
    return [CheckResult(
        "c11_monomial_identity",
        "n-fold application to the unit function reproduces t^n / n!",
        _status(worst < 5e-3), errs, 5e-3)]


def check_resolvent(ctx: _Context):
    js = intops.build_J("Jplus", "sinc", 1.0, 256)
    errs = {str(y): opconv.resolvent_exp_identity(y, js)
            for y in (1.0, -1.0, 5.0, -5.0)}
    worst = max(errs.values())
    return [CheckResult(
        "c12_resolvent_identity",
        "resolvent applied to the unit function reproduces e^{-ity}",
        _status(worst < 1e-4), errs, 1e-4)]


def check_convolution(ctx: _Context):
    cfg = ctx.cfg
    jp = intops.build_J("Jplus", "sinc", 1.0, 64)
    plan = opconv.make_plan(jp)
    w = jp.weights
    pairs = opconv.builtin_pairs()
    inputs = {
        "one": lambda y: np.ones_like(y),
        "t": lambda y: y,
        "sin": np.sin,
    }

    def rel_l2(a, b):
        return float(np.sqrt(np.sum(w * np.abs(a - b) ** 2)
                             / np.sum(w * np.abs(b) ** 2)))

    table = {}
    worst = 0.0
    for kname in ("exp", "exp2", "texp", "gauss"):
        for gname, gfun in inputs.items():
            qd = opconv.convolve_direct(pairs[kname], gfun, jp, cfg)
            qo = opconv.convolve_operator(pairs[kname], gfun, plan)
            r = rel_l2(qo, qd)
            table[f"{kname}*{gname}"] = r
            worst = max(worst, r)
    exact = 1.0 - np.exp(-jp.grid)
    direct_err = float(np.max(np.abs(
        opconv.convolve_direct(pairs["exp"], inputs["one"], jp, cfg) - exact)))
    op_err = rel_l2(opconv.convolve_operator(pairs["exp"], inputs["one"], plan),
                    exact)
    ok = worst < 1e-3 and direct_err < 1e-8 and op_err < 1e-3
    return [CheckResult(
        "c13_convolution_paths",
        "operator-function path matches direct quadrature for the stock "
        "kernels and inputs; closed-form case held to both paths",
        _status(ok),
        {"worst_pair": worst, "closed_form_direct": direct_err,
         "closed_form_operator": op_err},
        {"pairs": 1e-3, "direct": 1e-8})]


def check_inversion(ctx: _Context):
    cfg = ctx.cfg
    jp = intops.build_J("Jplus", "sinc", 1.0, 64)
    plan = opconv.make_plan(jp)
    w, grid = jp.weights, jp.grid
    pairs = opconv.builtin_pairs()

    def rel_l2(a, b):
        return float(np.sqrt(np.sum(w * np.abs(a - b) ** 2)
                             / np.sum(w * np.abs(b) ** 2)))

    table = {}
    for name in ("exp", "exp2", "texp", "gauss"):
        pair = pairs[name]
        table[name] = rel_l2(opconv.fourier_invert(pair, plan),
                             np.asarray(pair.k(grid)))
    kp = opconv.kappa_pair(0.5, cfg)
    table["kappa_plus_half"] = rel_l2(opconv.fourier_invert(kp, plan),
                                      np.asarray(kp.k(grid)))
    worst = max(table.values())
    return [CheckResult(
        "c14_fourier_inversion",
        "kernels recovered from their transforms alone, including the "
        "plus-side strip kernel at sigma = 1/2",
        _status(worst < 1e-3), table, 1e-3)]


def check_range_numbers(ctx: _Context):
    cfg = ctx.cfg
    sigmas = np.linspace(0.1, 0.9, 17)
    margin = 1e-12
    worst_a = -math.inf
    worst_b = math.inf
    for s in sigmas:
        rn = curves.range_numbers(float(s), cfg)
        worst_a = max(worst_a, rn.a_minus, rn.a_plus)
        worst_b = min(worst_b, rn.b_minus, rn.b_plus)
    ok = worst_a < -margin and worst_b > margin
    out = [CheckResult(
        "c15_range_numbers",
        "a < 0 and b > 0 for both kernels at 17 sigma values",
        _status(ok), {"max_a": worst_a, "min_b": worst_b}, margin)]
    out.append(CheckResult(
        "c15d_quadrant_placement",
        "as computed, both numbers a + i b lie in the second quadrant and "
        "both negations in the fourth; the source prose instead assigns "
        "the two kernels to different quadrants (recorded, not adjudicated)",
        "diagnostic",
        {"c_minus_quadrant": "second", "minus_c_minus_quadrant": "fourth",
         "c_plus_quadrant": "second"},
        None))
    return out


def check_curves(ctx: _Context):
    cfg = ctx.cfg
    s_grid = np.linspace(0.0, 1.0, 101)
    sigmas = [round(0.1 * k, 1) for k in range(1, 10)]
    reports, aggregate = curves.sigma_sweep(None, sigmas, s_grid, cfg)
    worst_poisson = 0.0
    for rep in reports:
        for smp in rep.samples:
            worst_poisson = max(
                worst_poisson,
                abs(smp.C_sigma.imag - smp.im_C_sigma_poisson),
                abs(smp.C_prime_sigma.imag - smp.im_C_prime_sigma_poisson))
    out = [CheckResult(
        "c16_poisson_forms",
        "direct imaginary parts match the Poisson-kernel forms over the "
        "full sigma and s grids",
        _status(worst_poisson < 1e-8), worst_poisson, 1e-8)]

    findings = []
    for rep in reports:
        bad = [k for k, v in rep.sign_summary.items() if not v]
        if bad:
            findings.append({"sigma": rep.sigma, "failed_sign_claims": bad})
    out.append(CheckResult(
        "c16d_sign_claims",
        "endpoint half-plane crossings and uniform derivative-curve signs "
        "as asserted in the source; failures recorded as findings since "
        "the claims are internally inconsistent as printed",
        "diagnostic",
        {"per_sigma_findings": findings, "aggregate": aggregate},
        None))
    return out


def check_zeros(ctx: _Context):
    suite = ctx.zero_suite
    recs = suite["records"]
    measured = {
        "winding_total": suite["total_winding"],
        "n_zeros": suite["n_zeros"],
        "ordinates": [r.z.t for r in recs],
        "sigma_offsets": [abs(r.z.sigma - 0.5) for r in recs],
        "zeta_residuals": [r.zeta_residual for r in recs],
        "discrepancies": suite["discrepancies"],
    }
    ok = (suite["total_winding"] == 3 and suite["n_zeros"] == 3
          and suite["all_on_line"] and suite["all_simple"])
    if ok:
        for rec, ref in zip(recs, ZERO_ORDINATES_30):
            ok = ok and abs(rec.z.t - ref) < 1e-6
            ok = ok and abs(rec.z.sigma - 0.5) < 1e-9
            ok = ok and rec.zeta_residual < 1e-7
    out = [CheckResult(
        "c17_zeros",
        "three zeros below t=30 at the frozen ordinates, each on the half "
        "line, simple, and coincident with the series oracle's zeros",
        _status(ok), measured,
        {"ordinate": 1e-6, "on_line": 1e-9, "zeta_residual": 1e-7})]

    scaled = [r.deriv_scaled for r in recs]
    out.append(CheckResult(
        "c17_simplicity_scaled",
        "envelope-normalized derivative |G_sigma / w| exceeds 1e-3 at "
        "every zero (the scale-free simplicity margin)",
        _status(bool(recs) and min(scaled) > 1e-3), scaled, 1e-3))

    raw = [abs(r.G_deriv) for r in recs]
    out.append(CheckResult(
        "c17_simplicity_raw",
        "raw |G_sigma| exceeds 1e-3 at every zero; unattainable in "
        "double precision because the derivative carries the envelope "
        "|Gamma(1/2 + i t)| ~ e^{-pi t/2} (1e-9 already at the first "
        "zero), so this check fails for purely kinematic reasons and is "
        "recorded as a finding",
        _status(bool(raw) and min(raw) > 1e-3), raw, 1e-3))
    return out


def check_determinism(ctx: _Context):
    """Byte-identity of two runs of a representative subset, in-process.

    Full-report identity across separate `verify` invocations is what the
    criterion means; the acceptance tests and the CLI tests run the whole
    suite twice and byte-compare.  This entry certifies the computational
    core (quadrature, linear algebra, seeded sampling) is replay-stable
    within one process.
    """
    def snapshot():
        ctx2 = _Context(ctx.cfg)
        parts = (check_closed_forms(ctx2) + check_range_numbers(ctx2)
                 + check_re_identity(ctx2))
        return report_document("determinism-probe", parts)

    ok = snapshot() == snapshot()
    return [CheckResult(
        "c18_determinism",
        "repeated runs produce byte-identical reports (full-suite identity "
        "is exercised by the acceptance tests; this entry replays a "
        "representative subset in-process)",
        _status(ok), "byte-compared", "identical")]


_GFUNC_CHECKS = [check_closed_forms, check_zeta_relation,
                 check_functional_equation, check_schwarz, check_split,
                 check_decay]
_OPERATOR_CHECKS = [check_norm, check_fov, check_re_identity,
                    check_theorem35, check_monomial, check_resolvent,
                    check_convolution, check_inversion]
_CURVE_CHECKS = [check_range_numbers, check_curves]
_ZERO_CHECKS = [check_zeros]

SUITES = {
    "gfunc": _GFUNC_CHECKS,
    "operators": _OPERATOR_CHECKS,
    "curves": _CURVE_CHECKS,
    "zeros": _ZERO_CHECKS,
    "all": (_GFUNC_CHECKS + _OPERATOR_CHECKS + _CURVE_CHECKS + _ZERO_CHECKS
            + [check_determinism]),
}
SUITE_NAMES = tuple(SUITES)


def run_suite(suite: str = "all", cfg: QuadConfig | None = None):
    """Run a named suite; returns (results, timings_ms)."""
    cfg = cfg or quadrule.DEFAULT_CONFIG
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {SUITE_NAMES}")
    ctx = _Context(cfg)
    results: list[CheckResult] = []
    timings: dict[str, float] = {}
    for fn in SUITES[suite]:
        t0 = time.perf_counter()
        out = fn(ctx)
        ms = (time.perf_counter() - t0) * 1000.0
        for r in out:
            timings[r.id] = round(ms / len(out), 3)
        results.extend(out)
    return results, timings


def report_document(suite: str, results: list[CheckResult]) -> str:
    counts = {"pass": 0, "fail": 0, "diagnostic": 0}
    for r in results:
        counts[r.status] += 1
    doc = {
        "suite": suite,
        "checks": [r.as_dict() for r in results],
        "counts": counts,
    }
    return json.dumps(doc, indent=2) + "\n"
