"""Tests for the spatial operators and model parameter validation."""

import numpy as np
import pytest
import scipy.fft as sfft

from fracchemo.errors import NumericError, ParameterError
from fracchemo.grid import Field, field_from_values, integrate, make_grid
from fracchemo.operators import (
    FlowSpec,
    ModelParams,
    chemo_identity_residual,
    frac_laplacian,
    frac_multiplier,
    grad_inv_laplacian,
    rhs,
    velocity,
)

from conftest import gaussian_field, random_smooth_field


class TestModelParams:
    def test_defaults_valid(self):
        p = ModelParams()
        assert p.alpha == 1.5 and p.mu == 0.0

    def test_alpha_range(self):
        with pytest.raises(ParameterError, match=r"alpha must lie in \(1,2\]"):
            ModelParams(alpha=2.5)
        with pytest.raises(ParameterError):
            ModelParams(alpha=1.0)

    def test_q_constraints(self):
        with pytest.raises(ParameterError):
            ModelParams(chi=1.0, q=2)
        ModelParams(chi=0.0, eps=1.0, q=1)  # permitted without chemotaxis

    def test_gamma_beta_windows(self):
        with pytest.raises(ParameterError):
            ModelParams(alpha=1.5, gamma=1.6)
        with pytest.raises(ParameterError):
            ModelParams(alpha=1.5, beta=1.5)
        p = ModelParams(alpha=1.5, gamma=1.2, beta=1.1)
        assert not p.moment_hypothesis_holds
        assert ModelParams(alpha=1.5, gamma=1.2, beta=1.3).moment_hypothesis_holds


class TestFlows:
    @pytest.mark.parametrize("spec", [
        FlowSpec("cellular", amplitude=1.3, wavenumber=8),
        FlowSpec("shear", amplitude=0.7, wavenumber=4),
        FlowSpec("custom", modes=((1, 2, 0.5, -0.2), (3, 0, 0.1, 0.4))),
    ])
    def test_divergence_free(self, spec):
        g = make_grid(2, 128, 8 * np.pi)
        ux, uy = velocity(spec, g)
        div = (sfft.ifftn(1j * g.xi[0] * sfft.fftn(ux))
               + sfft.ifftn(1j * g.xi[1] * sfft.fftn(uy))).real
        scale = max(np.abs(ux).max(), np.abs(uy).max(), 1e-30)
        assert np.max(np.abs(div)) <= 1e-10 * scale

    def test_u_linf_cellular(self):
        g = make_grid(2, 128, 8 * np.pi)
        spec = FlowSpec("cellular", amplitude=2.0, wavenumber=8)  # k0 = 1
        assert spec.u_linf(g) == pytest.approx(2.0, rel=1e-3)

    def test_zero_flow(self):
        g = make_grid(2, 64, np.pi)
        assert FlowSpec().u_linf(g) == 0.0


class TestFracLaplacian:
    def test_single_mode_eigenfunction(self):
        g = make_grid(2, 64, np.pi)  # integer wavenumbers
        X, Y = g.x
        f = field_from_values(g, np.cos(3 * X + 4 * Y))
        out = frac_laplacian(f, 1.5)
        assert np.allclose(out.values, 5.0**1.5 * f.values, atol=1e-10 * 5**1.5)

    def test_alpha2_matches_finite_difference(self):
        # the 2nd-order stencil's own truncation floor requires dx/width <= 0.02
        g = make_grid(2, 1024, 6.0)
        f = gaussian_field(g, mass=1.0, width=1.0)
        out = frac_laplacian(f, 2.0)
        v = f.values
        lap = np.zeros_like(v)
        for ax in (0, 1):
            lap += (np.roll(v, -1, ax) - 2 * v + np.roll(v, 1, ax)) / g.dx**2
        scale = np.abs(out.values).max()
        assert np.max(np.abs(out.values + lap)) <= 1e-4 * scale  # -Lap vs Lambda^2

    def test_alpha2_multiplier_bit_exact(self):
        g = make_grid(2, 64, 5.0)
        assert np.array_equal(frac_multiplier(g, 2.0), g.k2)

    def test_zero_mode_and_mean(self, grid2d):
        f = random_smooth_field(grid2d, seed=5, offset=2.0)
        out = frac_laplacian(f, 1.5)
        assert abs(integrate(out)) <= 1e-12 * np.abs(f.values).max() * grid2d.box_volume

    def test_real_output_symmetry(self, grid2d):
        f = random_smooth_field(grid2d, seed=6)
        w = sfft.ifftn(frac_multiplier(grid2d, 1.3) * sfft.fftn(f.values))
        assert np.max(np.abs(w.imag)) <= 1e-12 * max(np.abs(w.real).max(), 1e-30)

    def test_alpha_out_of_range(self, grid1d):
        f = random_smooth_field(grid1d, seed=1)
        with pytest.raises(ParameterError):
            frac_laplacian(f, 2.5)

    def test_nan_rejected(self, grid1d):
        vals = np.zeros(grid1d.shape)
        vals[0] = np.inf
        with pytest.raises(NumericError):
            frac_laplacian(Field(grid1d, vals), 1.5)


class TestGradInvLaplacian:
    def test_single_mode(self):
        g = make_grid(2, 64, np.pi)
        X, _ = g.x
        # rho = cos(x): multiplier i*xi/|xi|^2 on modes (+-1, 0) gives -sin(x)
        f = field_from_values(g, np.cos(X))
        gx, gy = grad_inv_laplacian(f)
        assert np.allclose(gx.values, -np.sin(X), atol=1e-12)
        assert np.max(np.abs(gy.values)) <= 1e-12

    def test_constant_maps_to_zero(self):
        g = make_grid(2, 32, 2.0)
        f = field_from_values(g, np.full(g.shape, 3.3))
        gx, gy = grad_inv_laplacian(f)
        assert np.max(np.abs(gx.values)) <= 1e-14
        assert np.max(np.abs(gy.values)) <= 1e-14

    def test_curl_free(self, grid2d):
        f = random_smooth_field(grid2d, seed=8, offset=1.0)
        gx, gy = grad_inv_laplacian(f)
        curl = (sfft.ifftn(1j * grid2d.xi[0] * sfft.fftn(gy.values))
                - sfft.ifftn(1j * grid2d.xi[1] * sfft.fftn(gx.values))).real
        scale = max(np.abs(gx.values).max(), np.abs(gy.values).max())
        assert np.max(np.abs(curl)) <= 1e-10 * scale

    def test_bump_attracts(self, grid2d):
        # gradient of the chemoattractant points toward a positive bump
        f = gaussian_field(grid2d, mass=1.0, width=1.0)
        gx, gy = grad_inv_laplacian(f)
        X, Y = grid2d.x
        r = np.hypot(X, Y)
        sel = (r > 0.5) & (r < 4.0)
        radial = (gx.values * X + gy.values * Y)[sel] / r[sel]
        assert np.all(radial < 0)

    def test_requires_2d(self, grid1d):
        f = random_smooth_field(grid1d, seed=2)
        with pytest.raises(ParameterError):
            grad_inv_laplacian(f)


class TestRhs:
    def test_pure_diffusion_single_mode(self):
        g = make_grid(2, 64, np.pi)
        X, Y = g.x
        f = field_from_values(g, np.cos(2 * X + Y))
        p = ModelParams(alpha=1.5)
        out = rhs(f, p)
        assert np.allclose(out.values, -(5.0**0.75) * f.values, atol=1e-10)

    def test_constant_reaction_only(self):
        g = make_grid(2, 32, 2.0)
        c = 1.7
        f = field_from_values(g, np.full(g.shape, c))
        p = ModelParams(alpha=1.5, eps=1.0, q=3)
        out = rhs(f, p)
        assert np.allclose(out.values, -(c**3), atol=1e-10)

    def test_mass_neutrality(self, grid2d):
        f = random_smooth_field(grid2d, seed=12, offset=2.5)  # positive-ish
        f = field_from_values(grid2d, np.abs(f.values) + 0.1)
        p = ModelParams(alpha=1.6, chi=0.8, eps=0.5, q=3,
                        flow=FlowSpec("cellular", amplitude=1.0, wavenumber=8))
        out = rhs(f, p)
        mass_rhs = integrate(out)
        sink = -p.eps * integrate(field_from_values(grid2d, f.values**3))
        assert abs(mass_rhs - sink) <= 1e-8 * (1 + abs(sink))

    def test_resolution_consistency_band_limited(self):
        # same band-limited data sampled at n and 2n gives the same rhs values
        L = 2 * np.pi
        p = ModelParams(alpha=1.5, chi=0.6, eps=0.4, q=3,
                        flow=FlowSpec("cellular", amplitude=0.5, wavenumber=2))
        outs = []
        for n in (64, 128):
            g = make_grid(2, n, L)
            f = random_smooth_field(g, seed=77, kmax=6, offset=2.0)
            outs.append(rhs(f, p).values)
        coarse, fine = outs
        scale = np.abs(coarse).max()
        assert np.max(np.abs(coarse - fine[::2, ::2])) <= 1e-8 * scale

    def test_advection_skew_symmetry(self, grid2d):
        f = random_smooth_field(grid2d, seed=13, offset=1.0)
        flow = FlowSpec("cellular", amplitude=1.2, wavenumber=8)
        p_flow = ModelParams(alpha=1.5, flow=flow)
        p_none = ModelParams(alpha=1.5)
        adv = rhs(f, p_flow).values - rhs(f, p_none).values  # = -div(u rho)
        inner = np.sum(f.values * adv) * grid2d.cell_volume
        scale = integrate(field_from_values(grid2d, f.values**2))
        assert abs(inner) <= 1e-8 * max(scale, 1.0)

    def test_nan_detection_names_term(self, grid2d):
        vals = np.ones(grid2d.shape)
        vals[0, 0] = np.nan
        f = Field(grid2d, vals)
        with pytest.raises(NumericError):
            rhs(f, ModelParams())


class TestChemoIdentity:
    def test_constant_residual_zero(self):
        g = make_grid(2, 32, 2.0)
        f = field_from_values(g, np.full(g.shape, 2.0))
        assert chemo_identity_residual(f, 3) == pytest.approx(0.0, abs=1e-12)

    def test_gaussian_q3(self):
        g = make_grid(2, 128, 8 * np.pi)
        f = gaussian_field(g, mass=1.0, width=1.0)
        assert chemo_identity_residual(f, 3) <= 1e-6

    def test_two_bumps_q4(self):
        g = make_grid(2, 128, 8 * np.pi)
        a = gaussian_field(g, mass=1.0, width=1.0, center=(3.0, 0.0))
        b = gaussian_field(g, mass=0.7, width=1.3, center=(-2.0, 1.0))
        f = field_from_values(g, a.values + b.values)
        assert chemo_identity_residual(f, 4) <= 1e-6

    def test_invalid_q(self, grid2d):
        f = gaussian_field(grid2d)
        with pytest.raises(ParameterError):
            chemo_identity_residual(f, 1)
