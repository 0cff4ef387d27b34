"""Brute-force oracles used only to validate the fast spectral paths.

The principal-value fractional Laplacian is integrated in polar form with
Taylor compensation inside an inner cut: the quadratic part of the symmetric
difference is integrated exactly from the analytic Hessian, the quartic
remainder numerically.  Oracles act on analytic callables, not grid fields,
so grid truncation never enters the comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .errors import ParameterError
from .grid import Field

__all__ = [
    "QuadratureSpec",
    "TestFunction",
    "c_norm",
    "pv_frac_laplacian",
    "direct_newtonian_grad",
    "gaussian_test_function",
    "cosine_test_function",
    "constant_test_function",
    "poly_gaussian_test_function",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel layout of the principal-value quadrature."""

    inner_cut: float = 0.25
    outer_cut: float = 60.0
    panels: int = 400
    angular_nodes: int = 64

    def __post_init__(self) -> None:
        if not (0 < self.inner_cut < self.outer_cut):
            raise ParameterError("require 0 < inner_cut < outer_cut")
        if self.panels < 8:
            raise ParameterError("panel budget too small")


@dataclass(frozen=True)
class TestFunction:
    """Analytic test function with closed-form Hessian (vectorized callables).

    ``value`` maps an (..., d) point array to values; ``hessian`` maps a single
    point of shape (d,) to the d x d Hessian.  ``osc_scale`` is the dominant
    wavenumber (0 for non-oscillatory), ``decay_radius`` a radius beyond which
    |f| is negligible (inf for non-decaying).
    """

    name: str
    value: Callable[[np.ndarray], np.ndarray]
    hessian: Callable[[np.ndarray], np.ndarray]
    d: int
    osc_scale: float = 0.0
    decay_radius: float = np.inf
    mean_at_infinity: float = 0.0  # limit of the sphere mean of f (fx for constants)
    sup_abs: float = 1.0


def gaussian_test_function(d: int, a: float = 1.0, center=None) -> TestFunction:
    """f(x) = exp(-a |x - c|^2)."""
    c = np.zeros(d) if center is None else np.asarray(center, float)

    def val(x):
        x = np.asarray(x, float)
        r2 = np.sum((x - c) ** 2, axis=-1)
        return np.exp(-a * r2)

    def hess(x):
        x = np.asarray(x, float) - c
        f = np.exp(-a * np.dot(x, x))
        return f * (4 * a * a * np.outer(x, x) - 2 * a * np.eye(d))

    return TestFunction(f"gaussian(a={a})", val, hess, d,
                        decay_radius=8.0 / np.sqrt(a))


def cosine_test_function(d: int, k) -> TestFunction:
    """f(x) = cos(k . x), the eigenfunction of the multiplier |k|^alpha."""
    k = np.atleast_1d(np.asarray(k, float))

    def val(x):
        x = np.asarray(x, float)
        return np.cos(np.sum(x * k, axis=-1))

    def hess(x):
        return -np.cos(float(np.dot(x, k))) * np.outer(k, k)

    return TestFunction(f"cos(k={k.tolist()})", val, hess, d,
                        osc_scale=float(np.linalg.norm(k)))


def constant_test_function(d: int, c: float = 1.0) -> TestFunction:
    def val(x):
        return np.full(np.asarray(x).shape[:-1], c)

    return TestFunction(f"const({c})", val, lambda x: np.zeros((d, d)), d,
                        mean_at_infinity=c, sup_abs=abs(c))


def poly_gaussian_test_function(d: int, a: float = 1.0) -> TestFunction:
    """f(x) = x_1^2 exp(-a |x|^2) (anisotropic; exercises mixed Hessian terms)."""

    def val(x):
        x = np.asarray(x, float)
        r2 = np.sum(x * x, axis=-1)
        return x[..., 0] ** 2 * np.exp(-a * r2)

    def hess(x):
        x = np.asarray(x, float)
        r2 = float(np.dot(x, x))
        g = np.exp(-a * r2)
        x1 = x[0]
        H = np.zeros((d, d))
        # d_i d_j [x1^2 g]: assemble from product rule
        grad_g = -2 * a * x * g
        hess_g = g * (4 * a * a * np.outer(x, x) - 2 * a * np.eye(d))
        H += x1 * x1 * hess_g
        e1 = np.zeros(d)
        e1[0] = 1.0
        H += 2 * x1 * (np.outer(e1, grad_g) + np.outer(grad_g, e1))
        H += 2 * g * np.outer(e1, e1)
        return H

    return TestFunction(f"x1^2*gaussian(a={a})", val, hess, d,
                        decay_radius=10.0 / np.sqrt(a))


def c_norm(d: int, alpha: float) -> float:
    """Normalization constant of the singular-integral fractional Laplacian.

    c = 2^(alpha-1) * alpha * Gamma((d+alpha)/2) / (pi^(d/2) Gamma(1-alpha/2)),
    evaluated in log space; both Gamma arguments are positive for alpha in (0,2).
    """
    if not (0.0 < alpha < 2.0):
        raise ParameterError(f"c_norm requires alpha in (0,2), got {alpha}")
    if d < 1:
        raise ParameterError(f"dimension must be >= 1, got {d}")
    log_c = ((alpha - 1.0) * np.log(2.0) + np.log(alpha)
             + gammaln((d + alpha) / 2.0)
             - (d / 2.0) * np.log(np.pi) - gammaln(1.0 - alpha / 2.0))
    return float(np.exp(log_c))


def _gauss_nodes(n: int = 16):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _radial_panels(r0: float, r1: float, osc_scale: float, budget: int) -> np.ndarray:
    """Panel edges: geometric growth near r0, capped by the oscillation period."""
    edges = [r0]
    r = r0
    cap = np.inf if osc_scale == 0 else np.pi / (2.0 * osc_scale)
    while r < r1 and len(edges) < budget:
        step = min(0.5 * r + 0.05, cap, r1 - r)
        r = min(r + step, r1)
        edges.append(r)
    if edges[-1] < r1:
        edges.extend(np.linspace(edges[-1], r1, budget - len(edges) + 2)[1:])
    return np.asarray(edges)


def _sphere_mean(f: TestFunction, x: np.ndarray, radii: np.ndarray,
                 n_theta: int):
    """Mean over the sphere of f(x + r omega) for each radius (d = 1 or 2)."""
    if f.d == 1:
        pts = x[None, None, :] + radii[:, None, None] * np.array([[1.0], [-1.0]])[None, :, :]
        vals = f.value(pts)
        return 0.5 * (vals[:, 0] + vals[:, 1])
    theta = (np.arange(n_theta) + 0.5) * (2 * np.pi / n_theta)
    omega = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    pts = x[None, None, :] + radii[:, None, None] * omega[None, :, :]
    vals = f.value(pts)
    return vals.mean(axis=1)


_SPHERE_AREA = {1: 2.0, 2: 2.0 * np.pi}


def pv_frac_laplacian(f: TestFunction, alpha: float, d: int, x,
                      spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """Principal-value fractional Laplacian of an analytic function at a point.

    Returns ``(value, error_estimate)``.  The estimate bounds the neglected
    tail beyond ``outer_cut`` plus the sub-resolution part of the inner disc.
    """
    if not (0.0 < alpha < 2.0):
        raise ParameterError(f"pv_frac_laplacian requires alpha in (0,2), got {alpha}")
    if d != f.d:
        raise ParameterError(f"test function is {f.d}-dimensional, requested d={d}")
    spec = spec or QuadratureSpec()
    x = np.atleast_1d(np.asarray(x, float))
    c = c_norm(d, alpha)
    S_d = _SPHERE_AREA[d]
    fx = float(f.value(x[None, :])[0])
    n_theta = spec.angular_nodes
    if f.osc_scale > 0:
        n_theta = max(n_theta, int(4 * f.osc_scale * spec.outer_cut / np.pi) + 32)

    gx, gw = _gauss_nodes(16)
    gx8, gw8 = _gauss_nodes(8)

    def integrate_panels(edges, integrand):
        """16-node composite Gauss plus an embedded 8-node error estimate."""
        a_, b_ = edges[:-1], edges[1:]
        mid = 0.5 * (a_ + b_)[:, None]
        half = 0.5 * (b_ - a_)[:, None]
        r = (mid + half * gx[None, :]).ravel()
        w = (half * gw[None, :]).ravel()
        total = float(np.sum(integrand(r) * w))
        r8 = (mid + half * gx8[None, :]).ravel()
        w8 = (half * gw8[None, :]).ravel()
        coarse = float(np.sum(integrand(r8) * w8))
        return total, abs(total - coarse)

    delta = spec.inner_cut

    # inner disc: exact quadratic part from the analytic Hessian ...
    trH = float(np.trace(f.hessian(x)))
    inner_exact = -0.5 * (trH / d) * S_d * delta ** (2.0 - alpha) / (2.0 - alpha)

    # ... plus the numerically integrated quartic remainder; the radial factor
    # r^{d-1} / r^{d+alpha} collapses to r^{-1-alpha}
    def inner_remainder(r):
        even = _sphere_mean(f, x, r, n_theta) - fx   # sphere average of the symmetric difference
        quad = 0.5 * (trH / d) * r * r               # sphere average of z^T H z / 2
        return -S_d * (even - quad) * r ** (-1.0 - alpha)

    r_floor = delta * 1e-4
    inner_edges = np.geomspace(r_floor, delta, 64)
    inner_num, inner_qerr = integrate_panels(inner_edges, inner_remainder)

    # outer annulus: direct symmetric-difference integrand
    def outer_integrand(r):
        return -S_d * (_sphere_mean(f, x, r, n_theta) - fx) * r ** (-1.0 - alpha)

    outer_edges = _radial_panels(delta, spec.outer_cut, f.osc_scale, spec.panels)
    outer_num, outer_qerr = integrate_panels(outer_edges, outer_integrand)

    # analytic tail of (f(x) - sphere-mean limit) beyond the outer cut; the
    # limit is 0 for decaying/oscillatory functions and f(x) for constants
    R = spec.outer_cut
    tail_fx = (fx - f.mean_at_infinity) * S_d * R ** (-alpha) / alpha

    # oscillatory families: two integration-by-parts corrections of the
    # neglected sphere-mean tail (the mean decays like cos/J0 of kr)
    tail_osc = 0.0
    if f.osc_scale > 0:
        k = f.osc_scale
        if d == 1:
            # mean(r) = m_R cos(k(r-R)) + s_R sin(k(r-R)); probe both quadratures
            m_R = float(_sphere_mean(f, x, np.array([R]), n_theta)[0])
            s_R = float(_sphere_mean(f, x, np.array([R + np.pi / (2 * k)]), n_theta)[0])
            g0 = R ** (-1.0 - alpha)
            g1 = -(1.0 + alpha) * R ** (-2.0 - alpha)
            # int_R^inf mean(r) g(r) dr ~ s_R g0/k - m_R g1/k^2 (two IBP terms);
            # the neglected outer integrand is -S_d * mean * g
            tail_osc = -S_d * (s_R * g0 / k - m_R * g1 / (k * k))

    value = c * (inner_exact + inner_num + outer_num + tail_fx + tail_osc)

    # error estimate: neglected -mean(f) tail plus sub-floor inner remainder
    if np.isfinite(f.decay_radius) and R >= f.decay_radius:
        sup_tail = float(np.abs(f.value((x + R * np.eye(d)[0])[None, :]))[0])
        tail_err = c * S_d * sup_tail * R ** (-alpha) / alpha
    elif f.osc_scale > 0:
        # after the IBP corrections the residual is O(g''/k^3)
        tail_err = c * S_d * f.sup_abs * (2.0 + alpha) ** 2 * R ** (-3.0 - alpha) / f.osc_scale**3
        if d == 2:  # only the leading analytic tail is corrected; J0 mean decays ~ r^{-1/2}
            tail_err = c * S_d * f.sup_abs * R ** (-1.5 - alpha) / f.osc_scale
    else:
        tail_err = c * S_d * abs(fx - f.mean_at_infinity) * R ** (-alpha) / alpha
    floor_err = c * S_d * max(abs(trH), 1e-30) * r_floor ** (4.0 - alpha) / max(4.0 - alpha, 1e-12)
    quad_err = 25.0 * c * (inner_qerr + outer_qerr) + 1e-13 * abs(value)
    return value, tail_err + floor_err + quad_err


def direct_newtonian_grad(rho: Field, x) -> np.ndarray:
    """Free-space grad (-Lap)^{-1} rho at a point by direct kernel summation (d=2).

    Kernel -(1/2pi)(x-y)/|x-y|^2 summed over cell midpoints; the singular cell
    (if x coincides with one) contributes zero by symmetry.  O(n^2) per point,
    so grids are capped at 64 points per axis.
    """
    grid = rho.grid
    if grid.d != 2:
        raise ParameterError("direct_newtonian_grad requires d=2")
    if grid.n > 64:
        raise ParameterError(f"grid too large for direct summation (n={grid.n} > 64)")
    x = np.asarray(x, float)
    X, Y = grid.x
    dx_ = x[0] - X
    dy_ = x[1] - Y
    r2 = dx_ * dx_ + dy_ * dy_
    near = r2 < (0.5 * grid.dx) ** 2
    r2 = np.where(near, 1.0, r2)
    kx = np.where(near, 0.0, dx_ / r2)
    ky = np.where(near, 0.0, dy_ / r2)
    w = rho.values * grid.cell_volume / (2.0 * np.pi)
    return np.array([-(kx * w).sum(), -(ky * w).sum()])
