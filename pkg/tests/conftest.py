"""Shared fixtures and field builders for the test suite."""

import numpy as np
import pytest

from fracchemo.grid import Field, Grid, field_from_values, make_grid


def gaussian_field(grid: Grid, mass: float = 1.0, width: float = 1.0,
                   center=None) -> Field:
    """Normalized Gaussian bump: integral equals ``mass`` up to box truncation."""
    d = grid.d
    if center is None:
        center = (0.0,) * d
    r2 = np.zeros(grid.shape)
    for X, c in zip(grid.x, center):
        r2 = r2 + (X - c) ** 2
    amp = mass / ((2.0 * np.pi) ** (d / 2) * width**d)
    return field_from_values(grid, amp * np.exp(-r2 / (2.0 * width**2)))


def random_smooth_field(grid: Grid, seed: int = 0, kmax: int = 6,
                        offset: float = 0.0) -> Field:
    """Random band-limited real field with modes |j| <= kmax per axis."""
    rng = np.random.default_rng(seed)
    vals = np.full(grid.shape, offset, dtype=float)
    base = np.pi / grid.half_width
    if grid.d == 1:
        (X,) = grid.x
        for j in range(1, kmax + 1):
            a, b = rng.normal(size=2) / (1 + j)
            vals += a * np.cos(base * j * X) + b * np.sin(base * j * X)
    else:
        X, Y = grid.x
        for jx in range(-kmax, kmax + 1):
            for jy in range(0, kmax + 1):
                if jx == 0 and jy == 0:
                    continue
                a, b = rng.normal(size=2) / (1 + jx * jx + jy * jy)
                phase = base * (jx * X + jy * Y)
                vals += a * np.cos(phase) + b * np.sin(phase)
    return field_from_values(grid, vals)


@pytest.fixture(scope="session")
def grid1d() -> Grid:
    return make_grid(1, 256, 16 * np.pi)


@pytest.fixture(scope="session")
def grid2d() -> Grid:
    return make_grid(2, 128, 8 * np.pi)


@pytest.fixture(scope="session")
def grid2d_fine() -> Grid:
    return make_grid(2, 256, 16 * np.pi)
