"""Spatial operators: fractional dissipation, chemotactic flux, advection, reaction.

All nonlinear products are dealiased by zero-padding: quadratic terms on a
3n/2 grid, the q-fold reaction power on an (q+1)n/2 grid, so band-limited
inputs produce exact spectral products.  The inverse Laplacian removes the
mean mode (standard torus convention); the resulting chemoattractant gradient
is curl-free and attractive for positive densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft as sfft

from .errors import NumericError, ParameterError
from .grid import Field, Grid, integrate

__all__ = [
    "FlowSpec",
    "ModelParams",
    "frac_laplacian",
    "grad_inv_laplacian",
    "rhs",
    "rhs_terms",
    "chemo_identity_residual",
    "velocity",
    "dealiased_power_spectrum",
]


# ---------------------------------------------------------------------------
# Flows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlowSpec:
    """Prescribed divergence-free velocity field.

    Every variant is the perpendicular gradient of a stream function psi, so
    div u = 0 holds spectrally.  ``wavenumber`` counts multiples of the box
    fundamental pi/L (the realized wavenumber is ``wavenumber * pi / L``).

    variants:
      - "none":     u = 0
      - "cellular": psi = A sin(k0 x) sin(k0 y)
      - "shear":    psi = (A/k0) cos(k0 y)  ->  u = (A sin(k0 y), 0)
      - "custom":   psi = Re sum a_m exp(i k0 (jx x + jy y)) from ``modes``
    """

    variant: str = "none"
    amplitude: float = 0.0
    wavenumber: int = 1
    modes: tuple[tuple[int, int, float, float], ...] = ()

    def __post_init__(self) -> None:
        if self.variant not in ("none", "cellular", "shear", "custom"):
            raise ParameterError(f"unknown flow variant {self.variant!r}")
        if self.variant in ("cellular", "shear"):
            if self.wavenumber < 1 or int(self.wavenumber) != self.wavenumber:
                raise ParameterError("flow wavenumber must be a positive integer")
        if self.variant == "custom" and not self.modes:
            raise ParameterError("custom flow requires at least one stream-function mode")

    @property
    def is_zero(self) -> bool:
        return self.variant == "none" or (
            self.variant in ("cellular", "shear") and self.amplitude == 0.0
        )

    def stream_function(self, X: np.ndarray, Y: np.ndarray, half_width: float) -> np.ndarray:
        k0 = np.pi * self.wavenumber / half_width
        if self.variant == "cellular":
            return self.amplitude * np.sin(k0 * X) * np.sin(k0 * Y)
        if self.variant == "shear":
            return (self.amplitude / k0) * np.cos(k0 * Y)
        if self.variant == "custom":
            base = np.pi / half_width
            psi = np.zeros_like(X)
            for jx, jy, ar, ai in self.modes:
                phase = base * (jx * X + jy * Y)
                psi += ar * np.cos(phase) - ai * np.sin(phase)
            return psi
        return np.zeros_like(X)

    def velocity_at(self, X: np.ndarray, Y: np.ndarray, half_width: float):
        """(u_x, u_y) = (-d_y psi, d_x psi), evaluated analytically."""
        k0 = np.pi * self.wavenumber / half_width
        if self.variant == "none":
            z = np.zeros_like(X)
            return z, z.copy()
        if self.variant == "cellular":
            a = self.amplitude * k0
            return (-a * np.sin(k0 * X) * np.cos(k0 * Y),
                    a * np.cos(k0 * X) * np.sin(k0 * Y))
        if self.variant == "shear":
            return self.amplitude * np.sin(k0 * Y), np.zeros_like(Y)
        base = np.pi / half_width
        ux = np.zeros_like(X)
        uy = np.zeros_like(X)
        for jx, jy, ar, ai in self.modes:
            phase = base * (jx * X + jy * Y)
            dpsi = -ar * np.sin(phase) - ai * np.cos(phase)  # d/dphase of psi
            ux -= base * jy * dpsi
            uy += base * jx * dpsi
        return ux, uy

    def u_linf(self, grid: Grid) -> float:
        if self.is_zero or grid.d == 1:
            return 0.0
        ux, uy = velocity(self, grid)
        return float(np.sqrt(ux * ux + uy * uy).max())


@lru_cache(maxsize=32)
def _velocity_cached(flow: FlowSpec, grid: Grid, m: int):
    n = grid.n
    if m == n:
        X, Y = grid.x
    else:
        L = grid.half_width
        x1 = -L + (2.0 * L / m) * np.arange(m)
        X, Y = np.meshgrid(x1, x1, indexing="ij")
    ux, uy = flow.velocity_at(X, Y, grid.half_width)
    ux.setflags(write=False)
    uy.setflags(write=False)
    return ux, uy


def velocity(flow: FlowSpec, grid: Grid, fine_n: int | None = None):
    """Velocity arrays on the grid (or on its fine product grid of size fine_n)."""
    if grid.d != 2 and not flow.is_zero:
        raise ParameterError("prescribed flows are realized in d=2 only")
    return _velocity_cached(flow, grid, fine_n or grid.n)


# ---------------------------------------------------------------------------
# Model parameters
# ---------------------------------------------------------------------------

_ZERO_FLOW = FlowSpec()


@dataclass(frozen=True)
class ModelParams:
    """Physical and diagnostic parameters of the evolution equation."""

    alpha: float = 1.5
    chi: float = 0.0
    eps: float = 0.0
    q: int = 3
    gamma: float = 1.3
    beta: float = 1.4
    flow: FlowSpec = _ZERO_FLOW
    mu: float = 0.0

    def __post_init__(self) -> None:
        if not (1.0 < self.alpha <= 2.0):
            raise ParameterError(f"alpha must lie in (1,2], got {self.alpha}")
        if self.chi < 0:
            raise ParameterError(f"chi must be >= 0, got {self.chi}")
        if self.eps < 0:
            raise ParameterError(f"eps must be >= 0, got {self.eps}")
        if int(self.q) != self.q or self.q < 1:
            raise ParameterError(f"q must be a positive integer, got {self.q}")
        if self.chi > 0 and self.q <= 2:
            raise ParameterError(f"q must exceed 2 when chi > 0, got q={self.q}")
        if not (1.0 < self.gamma < self.alpha):
            raise ParameterError(
                f"gamma must lie in (1, alpha)=(1,{self.alpha}), got {self.gamma}"
            )
        if not (0.0 <= self.beta < self.alpha):
            raise ParameterError(
                f"beta must lie in [0, alpha)=[0,{self.alpha}), got {self.beta}"
            )
        if self.mu < 0:
            raise ParameterError(f"mu must be >= 0, got {self.mu}")

    @property
    def moment_hypothesis_holds(self) -> bool:
        """Whether gamma <= beta (the finite-moment hypothesis; recorded, not enforced)."""
        return self.gamma <= self.beta


# ---------------------------------------------------------------------------
# Dealiased products
# ---------------------------------------------------------------------------

def _pad_size(n: int, degree: int) -> int:
    """Smallest even fine-grid size giving exact products of given degree."""
    m = math.ceil(n * (degree + 1) / 2)
    return m + (m % 2)


@lru_cache(maxsize=64)
def _pad_slices(n: int, m: int, d: int):
    lo = m // 2 - n // 2
    return tuple(slice(lo, lo + n) for _ in range(d))


def _pad_spectrum(spec: np.ndarray, m: int) -> np.ndarray:
    """Zero-pad an fft-layout spectrum from n to m points per axis.

    The coarse Nyquist planes are projected out so conjugate symmetry of real
    data survives the embedding; fields band-limited below Nyquist pad exactly.
    """
    n = spec.shape[0]
    d = spec.ndim
    sh = np.fft.fftshift(spec)
    for axis in range(d):  # drop the unpaired -n/2 plane
        idx = [slice(None)] * d
        idx[axis] = 0
        sh[tuple(idx)] = 0.0
    out = np.zeros((m,) * d, dtype=complex)
    out[_pad_slices(n, m, d)] = sh
    return np.fft.ifftshift(out)


def _truncate_spectrum(spec_fine: np.ndarray, n: int) -> np.ndarray:
    m = spec_fine.shape[0]
    d = spec_fine.ndim
    sh = np.fft.fftshift(spec_fine)[_pad_slices(n, m, d)].copy()
    for axis in range(d):
        idx = [slice(None)] * d
        idx[axis] = 0
        sh[tuple(idx)] = 0.0
    return np.fft.ifftshift(sh)


def _to_fine(spec: np.ndarray, m: int) -> np.ndarray:
    """Physical values of a coarse spectrum interpolated on the m-point grid."""
    n = spec.shape[0]
    scale = (m / n) ** spec.ndim
    return sfft.ifftn(_pad_spectrum(spec, m)).real * scale


def _from_fine(values_fine: np.ndarray, n: int) -> np.ndarray:
    m = values_fine.shape[0]
    scale = (n / m) ** values_fine.ndim
    return _truncate_spectrum(sfft.fftn(values_fine), n) * scale


def dealiased_power_spectrum(spec: np.ndarray, q: int) -> np.ndarray:
    """Coarse spectrum of the pointwise q-th power, exactly dealiased."""
    n = spec.shape[0]
    if q == 1:
        return spec.copy()
    m = _pad_size(n, q)
    w = _to_fine(spec, m)
    return _from_fine(w**q, n)


@lru_cache(maxsize=32)
def _fine_wavenumbers(n_fine: int, half_width: float, d: int):
    xi1 = 2.0 * np.pi * np.fft.fftfreq(n_fine, d=2.0 * half_width / n_fine)
    if d == 1:
        return (xi1,)
    kx, ky = np.meshgrid(xi1, xi1, indexing="ij")
    return kx, ky


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

def frac_multiplier(grid: Grid, alpha: float) -> np.ndarray:
    """Symbol |xi|^alpha on the grid (exactly |xi|^2 when alpha == 2)."""
    return grid.k2 ** (alpha / 2.0)


def frac_laplacian(f: Field, alpha: float) -> Field:
    """Apply the fractional Laplacian via its Fourier symbol |xi|^alpha.

    The zero mode maps to zero, so the output integrates to zero on the box.
    """
    if not (0.0 < alpha <= 2.0):
        raise ParameterError(f"frac_laplacian requires alpha in (0,2], got {alpha}")
    if not np.all(np.isfinite(f.values)):
        raise NumericError("frac_laplacian: field contains NaN/Inf")
    out = sfft.ifftn(frac_multiplier(f.grid, alpha) * f.spectrum()).real
    return Field(f.grid, out)


@lru_cache(maxsize=32)
def _inv_k2(grid: Grid) -> np.ndarray:
    inv = np.zeros_like(grid.k2)
    np.divide(1.0, grid.k2, out=inv, where=grid.k2 > 0)
    inv.setflags(write=False)
    return inv


def _grad_inv_lap_spectra(grid: Grid, spec: np.ndarray):
    """Spectra of the chemoattractant gradient: i xi_j / |xi|^2 rho_hat, mean removed."""
    inv = _inv_k2(grid)
    return tuple(1j * k * inv * spec for k in grid.xi)


def grad_inv_laplacian(rho: Field) -> tuple[Field, Field]:
    """Chemoattractant gradient grad (-Lap)^{-1} rho on the torus (d=2).

    The mean of rho is projected out before inversion (zero mode of the
    multiplier is 0); for a positive bump the field points toward the bump.
    """
    if rho.grid.d != 2:
        raise ParameterError("grad_inv_laplacian requires d=2")
    if not np.all(np.isfinite(rho.values)):
        raise NumericError("grad_inv_laplacian: field contains NaN/Inf")
    gx_s, gy_s = _grad_inv_lap_spectra(rho.grid, rho.spectrum())
    return (Field(rho.grid, sfft.ifftn(gx_s).real),
            Field(rho.grid, sfft.ifftn(gy_s).real))


def _divergence_of_product(grid: Grid, rho_fine: np.ndarray, vec_fine) -> np.ndarray:
    """Coarse spectrum of div(rho * vec) with the product formed on the fine grid."""
    out = np.zeros(grid.shape, dtype=complex)
    for k, comp in zip(grid.xi, vec_fine):
        out += 1j * k * _from_fine(rho_fine * comp, grid.n)
    return out


def rhs_terms(rho: Field, p: ModelParams, t: float = 0.0) -> dict[str, np.ndarray]:
    """Spectra of the individual right-hand-side terms (all mass-neutral except reaction)."""
    grid = rho.grid
    spec = rho.spectrum()
    terms: dict[str, np.ndarray] = {}

    terms["diffusion"] = -frac_multiplier(grid, p.alpha) * spec

    m_quad = _pad_size(grid.n, 2)
    rho_fine = None
    if not p.flow.is_zero or p.chi > 0:
        rho_fine = _to_fine(spec, m_quad)

    if not p.flow.is_zero:
        u_fine = velocity(p.flow, grid, fine_n=m_quad)
        terms["advection"] = -_divergence_of_product(grid, rho_fine, u_fine)

    if p.chi > 0:
        gx_s, gy_s = _grad_inv_lap_spectra(grid, spec)
        g_fine = (_to_fine(gx_s, m_quad), _to_fine(gy_s, m_quad))
        terms["chemotaxis"] = -p.chi * _divergence_of_product(grid, rho_fine, g_fine)

    if p.eps > 0:
        terms["reaction"] = -p.eps * dealiased_power_spectrum(spec, int(p.q))

    return terms


def rhs(rho: Field, p: ModelParams, t: float = 0.0) -> Field:
    """Full right-hand side: -u.grad(rho) - Lambda^alpha rho - chi div(rho grad c) - eps rho^q.

    Advection is applied in conservative form div(u rho) (identical for
    divergence-free u), so advection, diffusion and chemotaxis are exactly
    mass-neutral in spectral arithmetic.
    """
    if not np.all(np.isfinite(rho.values)):
        raise NumericError("rhs: input field contains NaN/Inf")
    terms = rhs_terms(rho, p, t)
    total = sum(terms.values())
    out = sfft.ifftn(total).real
    if not np.all(np.isfinite(out)):
        for name, s in terms.items():
            if not np.all(np.isfinite(sfft.ifftn(s).real)):
                raise NumericError(f"rhs: term '{name}' produced NaN/Inf")
        raise NumericError("rhs: assembled right-hand side contains NaN/Inf")
    return Field(rho.grid, out)


def chemo_identity_residual(rho: Field, q: int) -> float:
    """Relative residual of the integration-by-parts identity for the chemo term.

    Both sides of
        int rho^{q-1} div(rho grad Lap^{-1} rho) dx  =  ((q-1)/q) int rho^q (rho - mean rho) dx
    are evaluated by box quadrature; on the torus the mean-removed inversion
    shifts the right side by the mean term (it vanishes in free space).
    """
    if int(q) != q or q < 2:
        raise ParameterError(f"q must be an integer >= 2, got {q}")
    if rho.grid.d != 2:
        raise ParameterError("chemo_identity_residual requires d=2")
    grid = rho.grid
    gx_s, gy_s = _grad_inv_lap_spectra(grid, rho.spectrum())
    # div(rho * grad Lap^{-1} rho) = -div(rho * grad (-Lap)^{-1} rho)
    m_quad = _pad_size(grid.n, 2)
    div_spec = -_divergence_of_product(
        grid, _to_fine(rho.spectrum(), m_quad),
        (_to_fine(gx_s, m_quad), _to_fine(gy_s, m_quad)),
    )
    div_vals = sfft.ifftn(div_spec).real
    lhs = float(np.sum(rho.values ** (q - 1) * div_vals) * grid.cell_volume)
    mean_rho = integrate(rho) / grid.box_volume
    rhs_val = (q - 1) / q * float(
        np.sum(rho.values**q * (rho.values - mean_rho)) * grid.cell_volume
    )
    return abs(lhs - rhs_val) / max(abs(rhs_val), 1e-30)
