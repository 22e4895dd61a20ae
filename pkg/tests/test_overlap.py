"""Overlap quadrature against orthogonality deltas and the 1-D oracle."""

import json
import math
import pathlib

import numpy as np
import pytest

import oracles
from lgbell import (
    BeamGeometry,
    ModeIndex,
    QuadratureConfig,
    QuadratureNotConverged,
    SmfWeight,
    angular_family,
    orthogonality_matrix,
    overlap,
    radial_family,
)

GEOM = BeamGeometry(780e-9, 2e-3)
FIG_GEOM = BeamGeometry(780e-9, 1000e-6)
FIG_GEOM_REVISED = BeamGeometry(780e-9, 1000e-6, waist_mode="revised")
SMF = SmfWeight(750e-6)

FIXTURE = json.loads(
    (pathlib.Path(__file__).parent / "fixtures" / "smf_overlap_reference.json").read_text()
)


class TestUnweighted:
    def test_self_overlap_is_one(self):
        assert overlap(ModeIndex(0, 0), ModeIndex(0, 0), GEOM) == pytest.approx(1.0, abs=1e-6)

    def test_angular_cross_vanishes(self):
        value = overlap(ModeIndex(5, 0), ModeIndex(3, 0), GEOM)
        assert abs(value) < 1e-6

    def test_radial_cross_vanishes(self):
        value = overlap(ModeIndex(0, 5), ModeIndex(0, 2), GEOM)
        assert abs(value) < 1e-6

    @pytest.mark.parametrize("a,b", [((2, 1), (2, 1)), ((-4, 3), (-4, 3)), ((0, 8), (0, 8))])
    def test_sample_norms(self, a, b):
        assert overlap(ModeIndex(*a), ModeIndex(*b), GEOM) == pytest.approx(1.0, abs=1e-6)

    def test_direct_convention_pairs_opposite_charges(self):
        assert abs(overlap(ModeIndex(3, 1), ModeIndex(3, 1), GEOM, convention="direct")) < 1e-10
        assert abs(
            overlap(ModeIndex(3, 1), ModeIndex(-3, 1), GEOM, convention="direct")
        ) == pytest.approx(1.0, abs=1e-6)

    def test_identity_matrix_for_angular_family(self):
        modes = angular_family(11)
        matrix = orthogonality_matrix(modes, modes, GEOM)
        assert np.max(np.abs(matrix.entries - np.eye(11))) < 1e-6

    def test_doubling_stability(self):
        coarse = QuadratureConfig(radial_nodes=256, angular_nodes=256)
        fine = QuadratureConfig(radial_nodes=512, angular_nodes=512)
        for pair in [((0, 7), (0, 7)), ((3, 2), (3, 5)), ((0, 0), (0, 3))]:
            a, b = (ModeIndex(*pair[0]), ModeIndex(*pair[1]))
            delta = abs(overlap(a, b, GEOM, quadrature=coarse) - overlap(a, b, GEOM, quadrature=fine))
            assert delta < 1e-6


class TestWeighted:
    def test_matches_frozen_oracle_matrices(self):
        family = radial_family(11)
        for label, geom in (("standard", FIG_GEOM), ("revised", FIG_GEOM_REVISED)):
            reference = np.array(FIXTURE[label])
            matrix = orthogonality_matrix(family, family, geom, SMF)
            scale = np.abs(reference).max()
            assert np.max(np.abs(matrix.entries - reference)) < 1e-6 * scale, label

    def test_standard_radial_family_breaks_orthogonality(self):
        family = radial_family(11)
        matrix = orthogonality_matrix(family, family, FIG_GEOM, SMF)
        m2 = matrix.magnitude_squared
        ratios = m2 / np.diag(m2)[:, None]
        np.fill_diagonal(ratios, 0.0)
        assert ratios.max() > 0.1

    def test_revised_radial_family_diagonal_dominant(self):
        family = radial_family(11)
        matrix = orthogonality_matrix(family, family, FIG_GEOM_REVISED, SMF)
        m2 = matrix.magnitude_squared
        ratios = m2 / np.diag(m2)[:, None]
        np.fill_diagonal(ratios, 0.0)
        assert ratios.max() < 0.1

    def test_single_row_against_oracle(self):
        probe = ModeIndex(0, 5)
        for p in range(11):
            value = overlap(probe, ModeIndex(0, p), FIG_GEOM, SMF)
            expected = oracles.radial_overlap((0, 5), (0, p), 1000e-6, False, 750e-6)
            assert value.real == pytest.approx(expected, rel=1e-6, abs=1e-4)
            assert abs(value.imag) < 1e-9 * max(1.0, abs(expected))

    def test_angular_separability_survives_weighting(self):
        for lb in (1, 4, -2):
            value = overlap(ModeIndex(0, 2), ModeIndex(lb, 2), FIG_GEOM, SMF)
            assert abs(value) < 1e-10 * SMF.amplitude(np.array(0.0))

    def test_gaussian_self_weighted_real_positive(self):
        for w in (0.3e-3, 0.75e-3, 2e-3):
            value = overlap(ModeIndex(0, 0), ModeIndex(0, 0), FIG_GEOM, SmfWeight(w))
            assert value.imag == pytest.approx(0.0, abs=1e-12 * value.real)
            assert value.real > 0.0

    def test_hermitian_when_square_with_real_weight(self):
        family = radial_family(6)
        matrix = orthogonality_matrix(family, family, FIG_GEOM_REVISED, SMF)
        scale = np.abs(matrix.entries).max()
        assert np.max(np.abs(matrix.entries - matrix.entries.conj().T)) < 1e-9 * scale

    def test_normalized_entries_bounded_by_one(self):
        family = radial_family(8)
        matrix = orthogonality_matrix(family, family, FIG_GEOM, SMF)
        assert np.max(np.abs(matrix.normalized_entries())) <= 1.0 + 1e-9

    def test_row_normalized_peaks_at_one(self):
        family = radial_family(5)
        matrix = orthogonality_matrix(family, family, FIG_GEOM, SMF)
        rownorm = matrix.row_normalized_mag2()
        assert np.allclose(rownorm.max(axis=1), 1.0)


class TestConvergenceControl:
    def test_not_converged_identifies_pair(self):
        quad = QuadratureConfig(radial_nodes=4, angular_nodes=4, tolerance=1e-14, max_refinements=0)
        with pytest.raises(QuadratureNotConverged) as info:
            overlap(ModeIndex(0, 9), ModeIndex(0, 9), GEOM, quadrature=quad)
        assert info.value.pair == (ModeIndex(0, 9), ModeIndex(0, 9))

    def test_matrix_propagates_offending_pair(self):
        quad = QuadratureConfig(radial_nodes=4, angular_nodes=4, tolerance=1e-14, max_refinements=0)
        family = radial_family(10)
        with pytest.raises(QuadratureNotConverged) as info:
            orthogonality_matrix(family, family, GEOM, quadrature=quad)
        assert info.value.pair is not None

    def test_empty_lists_rejected(self):
        with pytest.raises(ValueError):
            orthogonality_matrix([], [ModeIndex(0, 0)], GEOM)

    def test_unknown_convention_rejected(self):
        with pytest.raises(ValueError):
            overlap(ModeIndex(0, 0), ModeIndex(0, 0), GEOM, convention="bogus")
