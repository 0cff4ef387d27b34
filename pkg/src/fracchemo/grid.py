"""Periodic spectral substrate: grids, transforms, quadrature.

The computational domain is the box [-L, L)^d with n points per axis and
angular wavenumbers xi_j = pi*j/L, j = -n/2 .. n/2-1, so the symbol of the
(negative) Laplacian is |xi|^2.  Transforms are plain unnormalized FFTs
(``inverse(forward(f)) == f``); the box integral of a field is the zero
spectral mode times the cell volume dx^d.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .errors import NumericError, ParameterError

__all__ = [
    "Grid",
    "Field",
    "Spectrum",
    "make_grid",
    "forward",
    "inverse",
    "integrate",
    "field_from_values",
    "field_from_function",
    "boundary_mass_fraction",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Immutable periodic grid on [-half_width, half_width)^d.

    Derived arrays (coordinates, wavenumbers, |xi|^2 table) are computed once
    in ``__post_init__`` and shared; they must be treated as read-only.
    """

    d: int
    n: int
    half_width: float

    def __post_init__(self) -> None:
        if self.d not in (1, 2):
            raise ParameterError(f"dimension must be 1 or 2, got {self.d}")
        if not isinstance(self.n, (int, np.integer)) or not _is_power_of_two(int(self.n)) or self.n < 16:
            raise ParameterError(f"n must be a power of two >= 16, got {self.n}")
        if not (self.half_width > 0):
            raise ParameterError(f"half_width must be positive, got {self.half_width}")

        L = float(self.half_width)
        n = int(self.n)
        dx = 2.0 * L / n  # exact in binary arithmetic since n is a power of two
        object.__setattr__(self, "dx", dx)
        x1 = -L + dx * np.arange(n)
        object.__setattr__(self, "x1", x1)
        xi1 = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)  # pi*j/L, j in fft layout
        object.__setattr__(self, "xi1", xi1)
        if self.d == 1:
            object.__setattr__(self, "k2", xi1 * xi1)
            object.__setattr__(self, "xi", (xi1,))
            object.__setattr__(self, "x", (x1,))
        else:
            kx, ky = np.meshgrid(xi1, xi1, indexing="ij")
            object.__setattr__(self, "k2", kx * kx + ky * ky)
            object.__setattr__(self, "xi", (kx, ky))
            gx, gy = np.meshgrid(x1, x1, indexing="ij")
            object.__setattr__(self, "x", (gx, gy))
        for arr in (self.k2, *self.xi, *self.x, x1, xi1):
            arr.setflags(write=False)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    @property
    def cell_volume(self) -> float:
        return self.dx**self.d

    @property
    def box_volume(self) -> float:
        return (2.0 * self.half_width) ** self.d

    def __hash__(self) -> int:
        return hash((self.d, self.n, self.half_width))


def make_grid(d: int, n: int, half_width: float) -> Grid:
    """Build a validated periodic grid."""
    return Grid(d=d, n=int(n), half_width=float(half_width))


@dataclass
class Spectrum:
    """Raw FFT coefficients of a real field (numpy fft layout, unnormalized)."""

    grid: Grid
    data: np.ndarray


@dataclass
class Field:
    """Real scalar field sampled on a Grid, with a lazily cached spectrum."""

    grid: Grid
    values: np.ndarray
    _spec: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise ParameterError(
                f"field shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    def spectrum(self) -> np.ndarray:
        """FFT coefficients of the field (cached; treat as read-only)."""
        if self._spec is None:
            self._spec = sfft.fftn(self.values)
        return self._spec

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values)

    def copy(self) -> "Field":
        out = Field(self.grid, self.values.copy())
        if self._spec is not None:
            out._spec = self._spec.copy()
        return out


def field_from_values(grid: Grid, values: np.ndarray) -> Field:
    vals = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        raise NumericError("field values contain NaN/Inf")
    return Field(grid, vals)


def field_from_function(grid: Grid, fn) -> Field:
    """Sample ``fn(*coords)`` on the grid (fn must accept broadcast arrays)."""
    return field_from_values(grid, fn(*grid.x))


def forward(f: Field) -> Spectrum:
    """Forward transform.  ``inverse(forward(f))`` reproduces f exactly."""
    if not np.all(np.isfinite(f.values)):
        raise NumericError("forward: field contains NaN/Inf")
    return Spectrum(f.grid, f.spectrum().copy())


def inverse(s: Spectrum) -> Field:
    vals = sfft.ifftn(s.data)
    out = Field(s.grid, vals.real.copy())
    if not np.all(np.isfinite(out.values)):
        raise NumericError("inverse: spectrum produced NaN/Inf values")
    return out


def integrate(f: Field) -> float:
    """Box quadrature: sum of values times cell volume (rectangle rule).

    The rectangle rule is spectrally accurate for smooth periodic data and
    equals the zero spectral mode times dx^d by construction.
    """
    return float(f.values.sum() * f.grid.cell_volume)


def boundary_mass_fraction(f: Field, margin: float = 0.1) -> float:
    """Fraction of |f|-mass within ``margin * half_width`` of the box boundary.

    Used to certify that the periodic truncation of free space is inert for a
    given run: concentrated solutions should keep this below ~1e-8.
    """
    L = f.grid.half_width
    cut = (1.0 - margin) * L
    if f.grid.d == 1:
        mask = np.abs(f.grid.x[0]) >= cut
    else:
        mask = (np.abs(f.grid.x[0]) >= cut) | (np.abs(f.grid.x[1]) >= cut)
    total = np.abs(f.values).sum()
    if total == 0.0:
        return 0.0
    return float(np.abs(f.values[mask]).sum() / total)
