"""Discretized indefinite integration operators on (0, beta), their norms
and numerical ranges, and the weighted-kernel range numbers (a, b).

Two discretizations are provided.  The midpoint-trapezoid scheme is
exactly triangular and satisfies the discrete analogue of

    Re (J+ g, g) = 1/2 | sum_i w_i g_i |^2

to machine precision, which makes it the right tool for norm and
field-of-values work.  The Sinc-map scheme replaces triangularity with a
well-separated spectrum in the open right half plane, which is what the
matrix-function machinery in :mod:`striplab.opconv` needs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import sici

from . import quadrule
from .errors import EigenFailure, NonConvergence, TruncationWarning, ZeroVector
from .quadrule import QuadConfig

__all__ = [
    "OperatorKind",
    "Scheme",
    "DiscreteOperator",
    "FovBoundary",
    "Theorem35Result",
    "build_J",
    "operator_norm",
    "field_of_values",
    "rayleigh",
    "theorem35_ab",
    "theorem35_crosscheck",
]


class OperatorKind(enum.Enum):
    JPLUS = "Jplus"
    JMINUS = "Jminus"


class Scheme(enum.Enum):
    TRAPEZOID = "trapezoid"
    SINC = "sinc"


def _as_kind(kind) -> OperatorKind:
    return kind if isinstance(kind, OperatorKind) else OperatorKind(str(kind))


def _as_scheme(scheme) -> Scheme:
    return scheme if isinstance(scheme, Scheme) else Scheme(str(scheme))


@dataclass(frozen=True)
class DiscreteOperator:
    """Dense discretization of an indefinite integration operator.

    Treat as immutable after construction; nothing in the package mutates
    the arrays, so instances are safe to share across workers.
    """

    matrix: np.ndarray
    grid: np.ndarray
    weights: np.ndarray
    beta: float
    kind: OperatorKind
    scheme: Scheme

    @property
    def n(self) -> int:
        return self.grid.size

    def apply(self, g: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(g)


def build_J(kind, scheme, beta: float, n: int) -> DiscreteOperator:
    """Discretize (J+ g)(t) = int_0^t g or (J- g)(t) = int_t^beta g.

    Trapezoid: midpoint grid t_i = (i + 1/2) h; the matrix is exactly
    lower (upper) triangular with O(h^2) consistency.  Sinc: conformal-map
    points with the convolution matrix 1/2 + Si(pi (j-k))/pi; spectrum
    lies in the open right half plane away from 0.

    Either way J- is built as the exact complement  J- = 1 w^T - J+,
    so the two operators always sum to the full integral.
    """
    kind = _as_kind(kind)
    scheme = _as_scheme(scheme)
    if n < 8:
        raise ValueError("need n >= 8")
    if beta <= 0:
        raise ValueError("need beta > 0")

    if scheme is Scheme.TRAPEZOID:
        h = beta / n
        grid = (np.arange(n) + 0.5) * h
        weights = np.full(n, h)
        jplus = np.tril(np.full((n, n), h), -1) + np.eye(n) * (h / 2)
    else:
        m_eff = (n - 1) / 2.0
        h = math.pi / math.sqrt(m_eff)
        ks = np.arange(n) - m_eff
        ek = np.exp(ks * h)
        grid = beta * ek / (1.0 + ek)
        inv_phi = grid * (beta - grid) / beta
        si, _ = sici(math.pi * (ks[:, None] - ks[None, :]))
        delta = 0.5 + si / math.pi
        jplus = h * delta * inv_phi[None, :]
        weights = h * inv_phi

    if kind is OperatorKind.JPLUS:
        matrix = jplus
    else:
        matrix = np.tile(weights, (n, 1)) - jplus
    return DiscreteOperator(matrix=matrix, grid=grid, weights=weights,
                            beta=float(beta), kind=kind, scheme=scheme)


def _weighted_similarity(matrix: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Similarity transform that carries the weighted L2 inner product to
    the standard one."""
    sw = np.sqrt(weights)
    return (sw[:, None] * matrix) / sw[None, :]


def operator_norm(op: DiscreteOperator) -> float:
    """L2(0, beta) operator norm: largest singular value in the weighted
    inner product."""
    s = _weighted_similarity(op.matrix, op.weights)
    return float(np.linalg.svd(s, compute_uv=False)[0])


@dataclass(frozen=True)
class FovBoundary:
    """Support-function description of a numerical range boundary.

    For each angle theta the extreme eigenvalue of the rotated Hermitian
    part gives the support value h(theta) and its eigenvector the boundary
    point; the set is the intersection of the half planes
    Re(e^{-i theta} z) <= h(theta).
    """

    angles: np.ndarray
    support_points: np.ndarray
    support_values: np.ndarray
    rayleigh_samples: np.ndarray

    def contains(self, points, tol: float = 1e-10) -> bool:
        points = np.atleast_1d(np.asarray(points, dtype=complex))
        proj = np.real(np.exp(-1j * self.angles)[:, None] * points[None, :])
        return bool(np.all(proj <= self.support_values[:, None] + tol))

    def min_real(self) -> float:
        return float(np.min(self.support_points.real))

    def max_real(self) -> float:
        return float(np.max(self.support_points.real))


def _standard_matrix(op) -> np.ndarray:
    if isinstance(op, DiscreteOperator):
        return _weighted_similarity(op.matrix, op.weights)
    return np.asarray(op, dtype=complex)


def field_of_values(op, n_angles: int = 360, n_rayleigh: int = 100,
                    seed: int = 20260809) -> FovBoundary:
    """Boundary of the numerical range by the rotation method, plus random
    Rayleigh samples (always interior points, used as a self-check)."""
    if n_angles < 8:
        raise ValueError("need n_angles >= 8")
    s = _standard_matrix(op)
    n = s.shape[0]
    angles = 2.0 * math.pi * np.arange(n_angles) / n_angles
    pts = np.empty(n_angles, dtype=complex)
    vals = np.empty(n_angles)
    for i, theta in enumerate(angles):
        rot = np.exp(-1j * theta) * s
        herm = 0.5 * (rot + rot.conj().T)
        try:
            evals, evecs = np.linalg.eigh(herm)
        except np.linalg.LinAlgError as exc:
            raise EigenFailure(f"eigh failed at angle {theta}") from exc
        v = evecs[:, -1]
        vals[i] = evals[-1]
        pts[i] = v.conj() @ (s @ v)

    rng = np.random.default_rng(seed)
    samples = np.empty(n_rayleigh, dtype=complex)
    for i in range(n_rayleigh):
        f = rng.normal(size=n) + 1j * rng.normal(size=n)
        samples[i] = (f.conj() @ (s @ f)) / (f.conj() @ f)
    return FovBoundary(angles=angles, support_points=pts,
                       support_values=vals, rayleigh_samples=samples)


def rayleigh(op, f) -> complex:
    """(T f, f) / (f, f) in the weighted inner product of the operator
    (plain matrices use the unweighted product)."""
    f = np.asarray(f, dtype=complex)
    if not np.any(f):
        raise ZeroVector("rayleigh quotient of the zero vector")
    if isinstance(op, DiscreteOperator):
        w = op.weights
        num = np.sum(w * np.conj(f) * (op.matrix @ f))
        den = np.sum(w * np.abs(f) ** 2)
    else:
        mat = np.asarray(op, dtype=complex)
        num = np.conj(f) @ (mat @ f)
        den = np.conj(f) @ f
    return complex(num / den)


@dataclass(frozen=True)
class Theorem35Result:
    """The two numerical-range numbers of a decaying kernel on (0, inf):
    a = -pi * int y k(y)^2 dy  and  b = (1/2) (int k(y) dy)^2."""

    a: float
    b: float
    kernel_id: str = ""
    sigma: float | None = None

    @property
    def c(self) -> complex:
        return complex(self.a, self.b)


def theorem35_ab(k, cfg: QuadConfig | None = None, kernel_id: str = "",
                 sigma: float | None = None) -> Theorem35Result:
    """Quadrature values of the range numbers for a real decaying kernel."""
    cfg = cfg or quadrule.DEFAULT_CONFIG
    moment, _ = quadrule.integrate_semiinf(
        lambda y: y * np.asarray(k(y)) ** 2, cfg)
    total, _ = quadrule.integrate_semiinf(k, cfg)
    a = -math.pi * float(np.real(moment))
    b = 0.5 * float(np.real(total)) ** 2
    return Theorem35Result(a=a, b=b, kernel_id=kernel_id, sigma=sigma)


def theorem35_crosscheck(k, X: float, n: int, cfg: QuadConfig | None = None):
    """Direct sampled evaluation of (i (1/J+) khat, khat) on (0, X).

    khat(x) = int_0^inf k(y) e^{i x y} dy is sampled on a midpoint grid,
    1/J+ acts as i d/dx (central differences), and the inner product uses
    the grid weights.  Returns (lhs, rhs, residual) where rhs = a + i b
    from :func:`theorem35_ab` and residual is the hard-checkable
    imaginary-part difference |Im lhs - b|.  The real parts converge too,
    but only in the analytic limit, so they are reported rather than
    asserted.
    """
    cfg = cfg or quadrule.DEFAULT_CONFIG
    if n < 512:
        raise ValueError("need n >= 512 for the sampled crosscheck")

    # y-nodes shared by every khat sample
    y_cut = quadrule._detect_cutoff(lambda y: np.asarray(k(y)), 0.0)
    width = min(2.0, 9.0 / max(1.0, X))
    n_panels = int(math.ceil(y_cut / width))
    edges = np.linspace(0.0, y_cut, n_panels + 1)
    gl_x, gl_w = quadrule._gl(16)
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    y_nodes = (mid + half * gl_x[None, :]).ravel()
    y_weights = (half * gl_w[None, :]).ravel()
    kern = np.asarray(k(y_nodes)) * y_weights

    hx = X / n
    xs = (np.arange(n) + 0.5) * hx
    khat = np.empty(n, dtype=complex)
    chunk = max(1, int(4e6 / max(y_nodes.size, 1)))
    for i in range(0, n, chunk):
        khat[i:i + chunk] = np.exp(1j * np.outer(xs[i:i + chunk], y_nodes)) @ kern

    rhs_ab = theorem35_ab(k, cfg)
    rhs = complex(rhs_ab.a, rhs_ab.b)

    norm2 = float(np.sum(hx * np.abs(khat) ** 2))
    if abs(khat[-1]) ** 2 > 1e-10 * norm2:
        import warnings
        warnings.warn(
            f"|khat(X)|^2 / ||khat||^2 = {abs(khat[-1]) ** 2 / norm2:.2e} "
            "exceeds 1e-10; enlarge X for a tighter crosscheck",
            TruncationWarning, stacklevel=2)

    d = np.empty(n, dtype=complex)
    d[1:-1] = (khat[2:] - khat[:-2]) / (2 * hx)
    d[0] = (-3 * khat[0] + 4 * khat[1] - khat[2]) / (2 * hx)
    d[-1] = (3 * khat[-1] - 4 * khat[-2] + khat[-3]) / (2 * hx)
    lhs = complex(np.sum(hx * np.conj(1j * d) * khat))

    residual = abs(lhs.imag - rhs_ab.b)
    return lhs, rhs, residual
