"""Indefinite convolution and Fourier inversion through functions of the
discretized integration operators.

The identities verified here express the one-sided convolution
q(t) = int k(t-y) g(y) dy as khat(-/+ i/J) g, and recover a kernel from
its transform alone as k = (1/J) khat(-/+ i/J) 1.  Matrix functions are
evaluated by diagonalizing the Sinc-scheme operator; the trapezoid
scheme's defective spectrum (everything piled on h/2) makes it useless
for this purpose and plan construction refuses it outside a diagnostics
mode that adds a tiny regularizing shift.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import wofz

from . import quadrule
from .errors import (IllConditionedWarning, SingularEigenvalue,
                     SingularResolvent)
from .gfunc import KernelSide, _as_side, kappa_side
from .intops import DiscreteOperator, OperatorKind, Scheme
from .quadrule import QuadConfig

__all__ = [
    "TransformPair",
    "MatrixFunctionPlan",
    "make_plan",
    "builtin_pairs",
    "pair_from_kernel",
    "convolve_direct",
    "convolve_operator",
    "fourier_invert",
    "monomial_identity",
    "resolvent_exp_identity",
    "cauchy_rep_check",
]


@dataclass(frozen=True)
class TransformPair:
    """A kernel with its one-sided Fourier transform.

    `k` is a function of the signed support variable (negative arguments
    for a minus-side kernel); `khat` must accept complex arguments on the
    kernel's side of analyticity (upper half plane for plus, lower for
    minus).
    """

    k: Callable
    khat: Callable
    side: KernelSide
    label: str = ""


def _check_conv_side(pair_side: KernelSide, kind: OperatorKind):
    ok = (pair_side is KernelSide.PLUS and kind is OperatorKind.JPLUS) or \
         (pair_side is KernelSide.MINUS and kind is OperatorKind.JMINUS)
    if not ok:
        raise ValueError(f"kernel side {pair_side.value} needs the matching "
                         f"operator kind, got {kind.value}")


def builtin_pairs(beta: float = 1.0) -> dict[str, TransformPair]:
    """The stock kernels used by the path-equivalence checks, with
    closed-form transforms."""
    sqrt_pi = math.sqrt(math.pi)
    pairs = {
        "exp": TransformPair(
            k=lambda t: np.exp(-np.asarray(t, dtype=float)),
            khat=lambda y: 1.0 / (1.0 - 1j * np.asarray(y, dtype=complex)),
            side=KernelSide.PLUS, label="exp"),
        "exp2": TransformPair(
            k=lambda t: np.exp(-2.0 * np.asarray(t, dtype=float)),
            khat=lambda y: 1.0 / (2.0 - 1j * np.asarray(y, dtype=complex)),
            side=KernelSide.PLUS, label="exp2"),
        "texp": TransformPair(
            k=lambda t: np.asarray(t, dtype=float) * np.exp(-np.asarray(t, dtype=float)),
            khat=lambda y: 1.0 / (1.0 - 1j * np.asarray(y, dtype=complex)) ** 2,
            side=KernelSide.PLUS, label="texp"),
        "gauss": TransformPair(
            k=lambda t: np.exp(-np.asarray(t, dtype=float) ** 2),
            khat=lambda y: 0.5 * sqrt_pi * wofz(0.5 * np.asarray(y, dtype=complex)),
            side=KernelSide.PLUS, label="gauss"),
        "exp_minus": TransformPair(
            k=lambda t: np.exp(np.asarray(t, dtype=float)),
            khat=lambda y: 1.0 / (1.0 + 1j * np.asarray(y, dtype=complex)),
            side=KernelSide.MINUS, label="exp_minus"),
    }
    return pairs


def kappa_pair(sigma: float, cfg: QuadConfig | None = None) -> TransformPair:
    """Transform pair for the plus-side strip kernel kappa^+(sigma, .).

    Its transform is the plus half-function evaluated at complex height:
    khat(y) = int_0^inf kappa^+(sigma, s) e^{i y s} ds.
    """
    from .gfunc import g_half

    cfg = cfg or quadrule.DEFAULT_CONFIG

    def khat(y):
        y = np.atleast_1d(np.asarray(y, dtype=complex))
        out = np.array([g_half(complex(sigma, 0.0), KernelSide.PLUS, cfg,
                               t_complex=complex(v)) for v in y])
        return out if out.size > 1 else complex(out[0])

    return TransformPair(k=lambda t: kappa_side(sigma, t, KernelSide.PLUS),
                         khat=khat, side=KernelSide.PLUS,
                         label=f"kappa_plus(sigma={sigma})")


def pair_from_kernel(k, side, cfg: QuadConfig | None = None,
                     label: str = "") -> TransformPair:
    """Numeric transform pair for a decaying kernel given only k."""
    cfg = cfg or quadrule.DEFAULT_CONFIG
    side = _as_side(side)
    sgn = 1.0 if side is KernelSide.PLUS else -1.0

    def khat(y):
        y = np.atleast_1d(np.asarray(y, dtype=complex))
        out = np.empty(y.size, dtype=complex)
        for i, v in enumerate(y):
            f = lambda s: np.asarray(k(sgn * s)) * np.exp(1j * v * sgn * s)
            out[i], _ = quadrule.integrate_halfline(f, cfg, osc_freq=abs(v))
        return out if out.size > 1 else complex(out[0])

    return TransformPair(k=k, khat=khat, side=side, label=label)


@dataclass(frozen=True)
class MatrixFunctionPlan:
    """Eigendecomposition of a discretized operator, reused across every
    matrix-function evaluation on that grid."""

    op: DiscreteOperator
    eigvals: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    condition_estimate: float


def make_plan(op: DiscreteOperator, diagnostics_mode: bool = False) -> MatrixFunctionPlan:
    """Diagonalize the operator matrix for spectral function evaluation.

    Refuses the trapezoid scheme (defective spectrum at h/2) unless
    diagnostics_mode adds a 1e-10 shift to make the decomposition merely
    terrible instead of meaningless.
    """
    matrix = op.matrix
    if op.scheme is Scheme.TRAPEZOID:
        if not diagnostics_mode:
            raise SingularEigenvalue(
                "trapezoid scheme has a defective spectrum clustered at h/2; "
                "build the operator with the sinc scheme (or pass "
                "diagnostics_mode=True to force a regularized decomposition)")
        matrix = matrix + 1e-10 * np.eye(op.n)
    lam, right = np.linalg.eig(matrix)
    if float(np.min(np.abs(lam))) < 1e-12:
        raise SingularEigenvalue(
            f"eigenvalue within 1e-12 of zero (min |lambda| = "
            f"{float(np.min(np.abs(lam))):.2e})")
    left = np.linalg.inv(right)
    svals = np.linalg.svd(right, compute_uv=False)
    cond = float(svals[0] / svals[-1])
    recon = right @ (lam[:, None] * left)
    residual = float(np.linalg.norm(recon - matrix) / np.linalg.norm(matrix))
    if residual > 1e-8 and not diagnostics_mode:
        raise SingularEigenvalue(
            f"eigendecomposition does not reproduce the matrix "
            f"(residual {residual:.2e}); spectrum too defective")
    return MatrixFunctionPlan(op=op, eigvals=lam, right_vectors=right,
                              left_vectors=left, condition_estimate=cond)


def _apply_function(plan: MatrixFunctionPlan, fvals: np.ndarray,
                    vec: np.ndarray) -> np.ndarray:
    return plan.right_vectors @ (fvals * (plan.left_vectors @ vec))


def _grid_values(g, grid: np.ndarray) -> np.ndarray:
    if callable(g):
        return np.asarray(g(grid), dtype=complex)
    arr = np.asarray(g, dtype=complex)
    if arr.shape != grid.shape:
        raise ValueError("input vector does not match the operator grid")
    return arr


def convolve_direct(pair: TransformPair, g, op_grid: DiscreteOperator,
                    cfg: QuadConfig | None = None) -> np.ndarray:
    """Reference path: the one-sided convolution by pointwise quadrature.

    plus:  q(t_i) = int_0^{t_i} k(t_i - y) g(y) dy
    minus: q(t_i) = int_{t_i}^{beta} k(t_i - y) g(y) dy
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    grid = op_grid.grid
    beta = op_grid.beta
    gf = (lambda y: np.asarray(g(y))) if callable(g) else None
    if gf is None:
        raise ValueError("convolve_direct needs g as a callable")
    out = np.empty(grid.size, dtype=complex)
    for i, t in enumerate(grid):
        if pair.side is KernelSide.PLUS:
            f = lambda y: np.asarray(pair.k(t - y)) * gf(y)
            out[i], _ = quadrule.integrate_finite(f, 0.0, t, cfg, osc_freq=2.0)
        else:
            f = lambda y: np.asarray(pair.k(t - y)) * gf(y)
            out[i], _ = quadrule.integrate_finite(f, t, beta, cfg, osc_freq=2.0)
    return out


def convolve_operator(pair: TransformPair, g, plan: MatrixFunctionPlan) -> np.ndarray:
    """Operator path: q = khat(-/+ i/J) g on the plan's grid."""
    _check_conv_side(pair.side, plan.op.kind)
    if plan.condition_estimate > 1e12:
        warnings.warn(
            f"eigenvector basis condition {plan.condition_estimate:.2e} "
            "exceeds 1e12; operator-path results are degraded",
            IllConditionedWarning, stacklevel=2)
    sgn = 1.0 if pair.side is KernelSide.PLUS else -1.0
    fvals = np.asarray(pair.khat(sgn * 1j / plan.eigvals), dtype=complex)
    vec = _grid_values(g, plan.op.grid)
    return _apply_function(plan, fvals, vec)


def fourier_invert(pair: TransformPair, plan: MatrixFunctionPlan) -> np.ndarray:
    """Recover the kernel from its transform alone:
    k = (1/J) khat(-/+ i/J) 1 evaluated on the plan's grid.

    For a plus-side pair this reproduces k on (0, beta).
    """
    _check_conv_side(pair.side, plan.op.kind)
    if plan.condition_estimate > 1e12:
        warnings.warn(
            f"eigenvector basis condition {plan.condition_estimate:.2e} "
            "exceeds 1e12; inversion results are degraded",
            IllConditionedWarning, stacklevel=2)
    sgn = 1.0 if pair.side is KernelSide.PLUS else -1.0
    fvals = np.asarray(pair.khat(sgn * 1j / plan.eigvals), dtype=complex) / plan.eigvals
    ones = np.ones(plan.op.n, dtype=complex)
    return _apply_function(plan, fvals, ones)


def monomial_identity(n: int, op: DiscreteOperator) -> float:
    """Max abs error of applying J n times to 1 against the monomials:
    (J+)^n 1 = t^n / n!  (and the mirrored t -> beta - t for J-)."""
    if not 0 <= n <= 6:
        raise ValueError("need 0 <= n <= 6")
    vec = np.ones(op.n)
    for _ in range(n):
        vec = op.matrix @ vec
    x = op.grid if op.kind is OperatorKind.JPLUS else op.beta - op.grid
    target = x ** n / math.factorial(n)
    return float(np.max(np.abs(vec - target)))


def resolvent_exp_identity(y: float, op: DiscreteOperator) -> float:
    """Max abs error of (1/(1 + i y J+)) 1 against e^{-i t y} on the grid
    (the conjugate identity for the opposite resolvent sign)."""
    if abs(y) > 50:
        raise ValueError("|y| <= 50 for the validated identity range")
    n = op.n
    a = np.eye(n) + 1j * y * op.matrix
    try:
        u = np.linalg.solve(a, np.ones(n, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise SingularResolvent(f"resolvent singular at y={y}") from exc
    target = np.exp(-1j * op.grid * y)
    return float(np.max(np.abs(u - target)))


def resolvent_series_gap(y: float, op: DiscreteOperator, n_terms: int = 30) -> float:
    """Max abs gap between the resolvent solve and the truncated Neumann
    series sum_{n} (-i y J)^n 1; finite because (J^n 1) decays like
    t^n / n!."""
    n = op.n
    a = np.eye(n) + 1j * y * op.matrix
    u = np.linalg.solve(a, np.ones(n, dtype=complex))
    term = np.ones(n, dtype=complex)
    acc = term.copy()
    for _ in range(n_terms):
        term = (-1j * y) * (op.matrix @ term)
        acc += term
    return float(np.max(np.abs(acc - u)))


def cauchy_rep_check(pair: TransformPair, z: complex,
                     cfg: QuadConfig | None = None) -> float:
    """Relative residual of the half-plane Cauchy representation

        khat(z) = -/+ (1/(2 pi i)) int_R khat(t) / (t - z) dt,

    valid for z strictly inside the side's half plane of analyticity
    (upper for plus, lower for minus).
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    z = complex(z)
    side = pair.side
    if abs(z.imag) < 1e-8:
        from .errors import OnRealAxis
        raise OnRealAxis("Cauchy representation undefined on the real axis")
    wrong = (side is KernelSide.PLUS and z.imag < 0) or \
            (side is KernelSide.MINUS and z.imag > 0)
    if wrong:
        raise ValueError(
            f"z={z} lies outside the {side.value}-side half plane of analyticity")

    inner_half = max(10.0, 2.0 * abs(z))
    outer = 5e4

    def f(t):
        return np.asarray(pair.khat(t)) / (t - z)

    val_inner, _ = quadrule.integrate_finite(
        f, -inner_half, inner_half, cfg,
        osc_freq=4.0 + abs(z), feature=(z.real, abs(z.imag)))

    def f_right(u):
        t = np.exp(u)
        return np.asarray(pair.khat(t)) / (t - z) * t

    def f_left(u):
        t = -np.exp(u)
        return np.asarray(pair.khat(t)) / (t - z) * np.exp(u)

    lo, hi = math.log(inner_half), math.log(outer)
    val_r, _ = quadrule.integrate_finite(f_right, lo, hi, cfg, osc_freq=2.0)
    val_l, _ = quadrule.integrate_finite(f_left, lo, hi, cfg, osc_freq=2.0)

    # analytic correction for the truncated tails: khat(t) ~ +/- i k(0) / t
    # as |t| -> inf (boundary term of integration by parts), whose two
    # tails add rather than cancel.
    k0 = complex(np.asarray(pair.k(np.array([0.0])))[0])
    a0 = 1j * k0 if side is KernelSide.PLUS else -1j * k0
    tail = a0 / z * np.log((1.0 + z / outer) / (1.0 - z / outer))

    total = val_inner + val_r + val_l + tail
    sign = 1.0 if side is KernelSide.PLUS else -1.0
    cauchy = sign * total / (2j * math.pi)
    direct = complex(np.asarray(pair.khat(np.array([z], dtype=complex)))[0])
    return abs(direct - cauchy) / max(abs(direct), 1e-300)
