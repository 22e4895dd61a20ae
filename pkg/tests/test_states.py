"""State construction, joint tables, fringes and modal decomposition."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lgbell import (
    ArnsState,
    BeamGeometry,
    ConstraintViolated,
    DimensionOutOfRange,
    ModeIndex,
    SmfWeight,
    analyzer_phase,
    family_decomposition,
    fringe_scan,
    fringe_visibility,
    joint_probability,
    make_eps_state,
    make_mes,
    modal_decomposition,
)

FIG_GEOM = BeamGeometry(780e-9, 1000e-6)
FIG_GEOM_REVISED = BeamGeometry(780e-9, 1000e-6, waist_mode="revised")
SMF = SmfWeight(750e-6)


def random_state(rng, d):
    return ArnsState(rng.normal(size=d) + 1j * rng.normal(size=d))


class TestConstruction:
    def test_mes_two(self):
        state = make_mes(2)
        assert np.allclose(state.coefficients, [1 / math.sqrt(2)] * 2)

    def test_mes_six_uniform(self):
        state = make_mes(6)
        assert state.dimension == 6
        assert np.allclose(state.coefficients, 1 / math.sqrt(6))

    def test_dimension_bounds(self):
        with pytest.raises(DimensionOutOfRange):
            make_mes(1)
        with pytest.raises(DimensionOutOfRange):
            make_mes(17)

    def test_eps_equal_weights_is_uniform(self):
        state = make_eps_state(1 / 3, 1 / 3)
        assert np.allclose(state.coefficients, 1 / math.sqrt(3))

    def test_eps_single_term(self):
        state = make_eps_state(1.0, 0.0)
        assert np.allclose(state.coefficients, [1.0, 0.0, 0.0])

    def test_eps_outside_simplex(self):
        with pytest.raises(ConstraintViolated):
            make_eps_state(0.5, 0.6)
        with pytest.raises(ConstraintViolated):
            make_eps_state(-0.1, 0.5)

    def test_normalization_after_construction(self):
        state = ArnsState([3.0, 4.0j, 1.0])
        assert np.sum(np.abs(state.coefficients) ** 2) == pytest.approx(1.0, abs=1e-12)

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            ArnsState([0.0, 0.0])

    def test_default_mode_map(self):
        state = make_mes(3)
        assert state.mode_map == (ModeIndex(0, 0), ModeIndex(1, 1), ModeIndex(2, 2))

    def test_mode_map_length_checked(self):
        with pytest.raises(ValueError):
            ArnsState([1.0, 1.0], mode_map=[ModeIndex(0, 0)])

    def test_analyzer_phase_parameterization(self):
        d = 5
        assert analyzer_phase("angular", d, 1, 2) == pytest.approx(2 * math.pi / d * 2.5)
        assert analyzer_phase("radial", d, 0, 3) == pytest.approx(2 * math.pi / d * (-3 + 0.25))
        assert analyzer_phase("radial", d, 1, 0, offset=0.3) == pytest.approx(
            2 * math.pi / d * (-0.25) + 0.3
        )
        with pytest.raises(ValueError):
            analyzer_phase("angular", d, 2, 0)


class TestJointProbability:
    def test_two_dimensional_hand_values(self):
        table = joint_probability(make_mes(2), 0, 0).probabilities
        same = math.cos(math.pi / 8) ** 2 / 2
        diff = math.sin(math.pi / 8) ** 2 / 2
        assert table[0, 0] == pytest.approx(same, abs=1e-12)
        assert table[1, 1] == pytest.approx(same, abs=1e-12)
        assert table[0, 1] == pytest.approx(diff, abs=1e-12)
        assert table[1, 0] == pytest.approx(diff, abs=1e-12)

    def test_matches_enumeration_oracle(self):
        rng = np.random.default_rng(11)
        for d in (2, 3, 5, 7):
            state = random_state(rng, d)
            for a in (0, 1):
                for b in (0, 1):
                    table = joint_probability(state, a, b).probabilities
                    expected = np.array(oracles.joint_table(state.coefficients, a, b))
                    assert np.max(np.abs(table - expected)) < 1e-12

    def test_mes_table_is_circulant(self):
        for d in (2, 5, 10):
            for a in (0, 1):
                for b in (0, 1):
                    p = joint_probability(make_mes(d), a, b).probabilities
                    shifted = np.roll(np.roll(p, 1, axis=0), 1, axis=1)
                    assert np.max(np.abs(p - shifted)) < 1e-12

    def test_single_term_state_is_uniform(self):
        d = 4
        state = ArnsState([0, 0, 1, 0])
        for a in (0, 1):
            for b in (0, 1):
                p = joint_probability(state, a, b).probabilities
                assert np.max(np.abs(p - 1.0 / d**2)) < 1e-12

    @settings(max_examples=60, deadline=None)
    @given(
        d=st.integers(2, 16),
        a=st.integers(0, 1),
        b=st.integers(0, 1),
        seed=st.integers(0, 2**31),
    )
    def test_probability_conservation(self, d, a, b, seed):
        state = random_state(np.random.default_rng(seed), d)
        assert joint_probability(state, a, b).total == pytest.approx(1.0, abs=1e-10)

    def test_invalid_settings_rejected(self):
        with pytest.raises(ValueError):
            joint_probability(make_mes(2), 2, 0)


class TestFringes:
    def test_two_dim_curve_is_half_cosine(self):
        thetas = np.linspace(0.0, 2 * math.pi, 73)
        curve = fringe_scan(make_mes(2), 0.0, thetas)
        for theta, intensity in curve:
            assert intensity == pytest.approx(math.cos(theta / 2) ** 2, abs=1e-12)

    def test_antiphase_when_fixed_phase_is_pi(self):
        thetas = np.linspace(0.0, 2 * math.pi, 73)
        curve0 = np.array([i for _, i in fringe_scan(make_mes(2), 0.0, thetas)])
        curve_pi = np.array([i for _, i in fringe_scan(make_mes(2), math.pi, thetas)])
        shifted = np.array(
            [i for _, i in fringe_scan(make_mes(2), 0.0, thetas + math.pi)]
        )
        assert np.max(np.abs(curve_pi - shifted)) < 1e-12
        assert curve0[0] == pytest.approx(1.0) and curve_pi[0] == pytest.approx(0.0, abs=1e-12)

    def test_ten_dim_sharp_principal_maxima(self):
        d = 10
        thetas = np.linspace(0.0, 2 * math.pi, 1440, endpoint=False)
        curve = np.array([i for _, i in fringe_scan(make_mes(d), 0.0, thetas)])
        expected = np.array(oracles.fringe_curve(make_mes(d).coefficients, thetas))
        assert np.max(np.abs(curve - expected)) < 1e-12
        assert curve[0] == pytest.approx(1.0, abs=1e-12)
        # nulls at multiples of 2 pi / d bound the principal peak width
        null = 1440 // d
        assert curve[null] == pytest.approx(0.0, abs=1e-12)
        assert np.all(curve[null : 1440 - null] < 0.6)

    def test_visibility_extremes(self):
        for d in range(2, 11):
            assert fringe_visibility(make_mes(d)) == pytest.approx(1.0, abs=1e-9)
        single = ArnsState([0, 0, 1.0])
        assert fringe_visibility(single) == pytest.approx(0.0, abs=1e-9)

    def test_offset_compensation(self):
        state = make_eps_state(0.5, 0.2)
        thetas = np.linspace(0.0, 2 * math.pi, 47)
        delta = 0.37
        plain = fringe_scan(state, 0.4, thetas)
        compensated = fringe_scan(state, 0.4, thetas - delta, phase_offsets=(delta, 0.0))
        for (_, a), (_, b) in zip(plain, compensated):
            assert a == pytest.approx(b, abs=1e-12)


class TestDecomposition:
    def test_ideal_mes_is_diagonal(self):
        density = modal_decomposition(make_mes(6))
        assert np.allclose(density.powers, np.eye(6) / 6.0)
        assert density.power_visibility == pytest.approx(1.0, abs=1e-15)

    def test_ideal_any_diagonal_state_has_unit_visibility(self):
        state = ArnsState([0.2, 0.5j, -0.8, 0.1])
        assert modal_decomposition(state).power_visibility == 1.0

    def test_physical_mes_diagonal_dominant_with_crosstalk(self):
        density = modal_decomposition(make_mes(6), FIG_GEOM_REVISED, SMF)
        powers = density.powers
        off = powers - np.diag(np.diag(powers))
        assert off.max() > 0.0  # crosstalk present
        for row in range(6):
            assert powers[row, row] > off[row].max()
        assert 0.5 < density.power_visibility < 1.0

    def test_family_ideal_identity(self):
        modes = [ModeIndex(l, 0) for l in range(11)]
        density = family_decomposition(modes)
        assert np.allclose(density.powers, np.eye(11))

    def test_family_physical_angular_beats_radial(self):
        angular = family_decomposition(
            [ModeIndex(l, 0) for l in range(11)], FIG_GEOM, SMF
        )
        radial = family_decomposition(
            [ModeIndex(0, p) for p in range(11)], FIG_GEOM, SMF
        )
        assert angular.power_visibility > radial.power_visibility
        assert radial.power_visibility < 1.0

    def test_weight_requires_geometry(self):
        with pytest.raises(ValueError):
            modal_decomposition(make_mes(2), None, SMF)
