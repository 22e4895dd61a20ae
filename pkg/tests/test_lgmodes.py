"""Mode field construction: polynomials, waists, normalization, rendering."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lgbell import (
    BeamGeometry,
    EmptyState,
    GridTooCoarse,
    ModeIndex,
    beam_radius,
    default_extent,
    effective_waist,
    laguerre_poly,
    lg_field,
    rayleigh_range,
    render_field,
)

GEOM = BeamGeometry(780e-9, 2e-3)
GEOM_REVISED = BeamGeometry(780e-9, 2e-3, waist_mode="revised")


def laguerre_exact(p, alpha, x):
    """Exact rational series sum, converted to float at the end."""
    xf = Fraction(x)
    total = Fraction(0)
    for k in range(p + 1):
        total += Fraction((-1) ** k * math.comb(p + alpha, p - k), math.factorial(k)) * xf**k
    return float(total)


class TestLaguerre:
    def test_order_zero_is_one(self):
        assert laguerre_poly(0, 0, 3.7) == 1.0

    def test_order_one(self):
        assert laguerre_poly(1, 0, 2.0) == pytest.approx(-1.0, abs=1e-15)

    def test_against_series(self):
        assert laguerre_poly(5, 3, 1.5) == pytest.approx(
            oracles.laguerre_series(5, 3, 1.5), rel=1e-12
        )

    def test_vectorized(self):
        xs = np.linspace(0.0, 30.0, 7)
        vals = laguerre_poly(4, 2, xs)
        assert vals.shape == xs.shape
        for x, v in zip(xs, vals):
            assert v == pytest.approx(laguerre_exact(4, 2, float(x)), rel=1e-11)

    def test_rejects_negative_indices(self):
        with pytest.raises(ValueError):
            laguerre_poly(-1, 0, 1.0)
        with pytest.raises(ValueError):
            laguerre_poly(0, -2, 1.0)

    @settings(max_examples=200, deadline=None)
    @given(
        p=st.integers(0, 15),
        alpha=st.integers(0, 15),
        x=st.floats(0.0, 50.0, allow_nan=False),
    )
    def test_matches_exact_series(self, p, alpha, x):
        exact = laguerre_exact(p, alpha, x)
        assert laguerre_poly(p, alpha, x) == pytest.approx(
            exact, rel=1e-10, abs=1e-10 * max(1.0, abs(exact))
        )


class TestWaists:
    def test_fundamental_is_unscaled(self):
        assert effective_waist(ModeIndex(0, 0), GEOM_REVISED) == 2e-3

    def test_high_order_scaling(self):
        w = effective_waist(ModeIndex(10, 10), GEOM_REVISED)
        assert w == pytest.approx(2e-3 / math.sqrt(31), rel=1e-12)
        # the standard-mode footprint ratio relative to the Gaussian
        assert 2e-3 / w == pytest.approx(5.5678, abs=1e-3)

    def test_exact_integer_root(self):
        geom = BeamGeometry(780e-9, 1e-3, waist_mode="revised")
        assert effective_waist(ModeIndex(1, 1), geom) == pytest.approx(0.5e-3, rel=1e-15)

    def test_standard_ignores_order(self):
        assert effective_waist(ModeIndex(7, 4), GEOM) == 2e-3

    def test_mode_index_validation(self):
        with pytest.raises(ValueError):
            ModeIndex(0, -1)
        assert ModeIndex(-3, 2).order == 8


class TestLgField:
    def test_gaussian_origin_value(self):
        value = lg_field(ModeIndex(0, 0), GEOM, 0.0, 0.0)
        assert value.imag == 0.0
        assert value.real == pytest.approx(math.sqrt(2.0 / math.pi) / 2e-3, rel=1e-12)

    def test_vortex_vanishes_on_axis(self):
        assert lg_field(ModeIndex(1, 0), GEOM, 0.0, 0.0) == 0.0

    def test_gouy_phase_at_rayleigh_range(self):
        mode = ModeIndex(2, 1)
        zr = rayleigh_range(mode, GEOM)
        # on-axis limit: all phase except Gouy vanishes as r -> 0
        value = lg_field(mode, GEOM, 1e-15, 0.0, zr)
        expected = (2 * 1 + 2 + 1) * math.atan(1.0)  # 5 pi / 4
        assert math.remainder(np.angle(value) - expected, 2 * math.pi) == pytest.approx(
            0.0, abs=1e-9
        )

    @pytest.mark.parametrize("geom", [GEOM, GEOM_REVISED])
    @pytest.mark.parametrize("z_frac", [0.0, 1.0])
    def test_unit_power(self, geom, z_frac):
        # radial quadrature of |E|^2 2 pi r dr over every |l| <= 10, p <= 10
        nodes, weights = np.polynomial.legendre.leggauss(600)
        for l in range(-10, 11):
            for p in range(0, 11):
                mode = ModeIndex(l, p)
                z = z_frac * rayleigh_range(mode, geom)
                wz = beam_radius(mode, geom, z)
                r_max = wz * (math.sqrt(mode.order) + 6.0)
                r = 0.5 * r_max * (nodes + 1.0)
                wr = 0.5 * r_max * weights
                profile = np.abs(lg_field(mode, geom, r, 0.0, z)) ** 2
                power = 2.0 * math.pi * np.sum(wr * profile * r)
                assert power == pytest.approx(1.0, abs=1e-6), (l, p, z_frac)

    def test_helical_winding(self):
        for l in (-4, 1, 3):
            mode = ModeIndex(l, 2)
            z = 0.4 * rayleigh_range(mode, GEOM)
            radius = beam_radius(mode, GEOM, z)
            phis = np.linspace(0.0, 2.0 * math.pi, 361)
            values = lg_field(mode, GEOM, radius, phis, z)
            unwrapped = np.unwrap(np.angle(values))
            assert unwrapped[-1] - unwrapped[0] == pytest.approx(2.0 * math.pi * l, abs=1e-9)

    @pytest.mark.parametrize("l,p", [(1, 0), (2, 3), (5, 6), (-3, 4)])
    def test_ring_count(self, l, p):
        mode = ModeIndex(l, p)
        w = effective_waist(mode, GEOM_REVISED)
        r = np.linspace(0.0, 1.6 * w * math.sqrt(mode.order), 6000)
        profile = np.abs(lg_field(mode, GEOM_REVISED, r, 0.0)) ** 2
        interior = (
            (profile[1:-1] > profile[:-2])
            & (profile[1:-1] > profile[2:])
            & (profile[1:-1] > profile.max() * 1e-9)
        )
        assert int(interior.sum()) == p + 1

    def test_self_similarity_under_propagation(self):
        mode = ModeIndex(3, 2)
        z = 1.7 * rayleigh_range(mode, GEOM)
        scale = effective_waist(mode, GEOM) / beam_radius(mode, GEOM, z)
        r = np.linspace(0.0, 3.0 * effective_waist(mode, GEOM) * math.sqrt(mode.order), 500)
        propagated = np.abs(lg_field(mode, GEOM, r, 0.0, z)) ** 2
        rescaled = np.abs(lg_field(mode, GEOM, r * scale, 0.0, 0.0)) ** 2 * scale**2
        assert np.max(np.abs(propagated - rescaled)) <= 1e-6 * rescaled.max()


class TestRenderField:
    def test_gaussian_peak_at_center(self):
        field = render_field([(ModeIndex(0, 0), 1.0)], GEOM, resolution=128)
        peak = np.unravel_index(np.argmax(field.intensity), field.intensity.shape)
        assert abs(peak[0] - 63.5) <= 1 and abs(peak[1] - 63.5) <= 1
        assert field.power == pytest.approx(1.0, abs=1e-6)

    def test_superposition_power(self):
        coeffs = [(ModeIndex(0, 0), 0.6), (ModeIndex(2, 1), 0.8j)]
        field = render_field(coeffs, GEOM_REVISED, resolution=512)
        assert field.power == pytest.approx(1.0, abs=1e-6)

    def test_seven_ring_mode_inside_gaussian_footprint(self):
        # the (6, 6) size-matched mode keeps the fundamental footprint
        mode = ModeIndex(6, 6)
        field = render_field([(mode, 1.0)], GEOM_REVISED, resolution=1024)
        assert field.extent == pytest.approx(4.0 * 2e-3, rel=1e-12)
        center = field.resolution // 2
        profile = field.intensity[center, center:]
        interior = (
            (profile[1:-1] > profile[:-2])
            & (profile[1:-1] > profile[2:])
            & (profile[1:-1] > profile.max() * 1e-9)
        )
        assert int(interior.sum()) == 7
        radii = np.arange(profile.size) * field.dx
        bright = radii[profile > profile.max() * 1e-4]
        assert bright.max() <= 2e-3 * 1.3  # within the (0,0) beam footprint

    def test_two_mode_interference_has_one_azimuthal_node(self):
        coeffs = [(ModeIndex(0, 0), 1.0), (ModeIndex(1, 0), 1.0)]
        field = render_field(coeffs, GEOM, resolution=256)
        radius = 2e-3 / math.sqrt(2.0)  # peak of the l=1 ring
        phis = np.linspace(0.0, 2.0 * math.pi, 360, endpoint=False)
        n = field.resolution
        ix = np.clip((radius * np.cos(phis)) / field.dx + (n - 1) / 2, 0, n - 1).astype(int)
        iy = np.clip((radius * np.sin(phis)) / field.dx + (n - 1) / 2, 0, n - 1).astype(int)
        ring = field.intensity[iy, ix]
        # one lobe, one node: intensity bright at phi=0, dark at phi=pi
        r00 = oracles.lg_radial(0, 0, 2e-3, radius)
        r10 = oracles.lg_radial(1, 0, 2e-3, radius)
        bright = abs(r00 + r10) ** 2
        dark = abs(r00 - r10) ** 2
        assert ring[0] == pytest.approx(bright, rel=0.05)
        assert ring[180] == pytest.approx(dark, rel=0.2, abs=bright * 0.01)
        assert ring[0] > 10.0 * ring[180]

    def test_empty_state_rejected(self):
        with pytest.raises(EmptyState):
            render_field([], GEOM)
        with pytest.raises(EmptyState):
            render_field([(ModeIndex(0, 0), 0.0)], GEOM)

    def test_grid_too_coarse(self):
        with pytest.raises(GridTooCoarse):
            render_field([(ModeIndex(6, 6), 1.0)], GEOM_REVISED, resolution=256)

    def test_default_extent_tracks_largest_mode(self):
        modes = [ModeIndex(0, 0), ModeIndex(4, 2)]
        assert default_extent(modes, GEOM) == pytest.approx(4.0 * 2e-3 * 3.0, rel=1e-12)
        assert default_extent(modes, GEOM_REVISED) == pytest.approx(4.0 * 2e-3, rel=1e-12)
