import math
from fractions import Fraction

import pytest

from cantorframes import (
    DigitSystem,
    NotCertifiedPacking,
    collinear_lower_bounds,
    cross_bessel_experiment,
    degeneracy_experiment,
    jp_spectrum,
    rotation_experiment,
)

FOUR = DigitSystem.one_dimensional(4, [0, 1])
EIGHT = DigitSystem.one_dimensional(8, [0, 1])
SIXTEEN_01 = DigitSystem.one_dimensional(16, [0, 1])
SIXTEEN_04 = DigitSystem.one_dimensional(16, [0, 4])


class TestDegeneracy:
    def test_quarter_sum_table(self):
        freq_set = jp_spectrum(FOUR, [0, 2], 4)
        result = degeneracy_experiment(SIXTEEN_01, SIXTEEN_04, 0, 2, freq_set, [2, 8, 32, 128])
        masses = {r.k: r.ball_mass for r in result.rows}
        assert masses == {2: 1, 8: Fraction(1, 2), 32: Fraction(1, 2), 128: Fraction(1, 4)}
        assert abs(result.upper_estimate - 5) < 1e-9
        assert abs(result.nu_upper_estimate - 4) < 1e-9
        for row in result.rows:
            assert row.quotient <= result.upper_estimate * float(row.ball_mass) + 1e-10
            assert row.quotient_over_mass <= result.nu_upper_estimate + 1e-9

    def test_large_ball_is_trivial(self):
        freq_set = jp_spectrum(FOUR, [0, 2], 2)
        result = degeneracy_experiment(SIXTEEN_01, SIXTEEN_04, 0, 1, freq_set, [1])
        assert result.rows[0].ball_mass == 1
        assert result.rows[0].inverse_mass == 1

    def test_refuses_non_packing_pair(self):
        freq_set = jp_spectrum(FOUR, [0, 2], 2)
        with pytest.raises(NotCertifiedPacking):
            degeneracy_experiment(SIXTEEN_01, SIXTEEN_01, 0, 1, freq_set, [2])


class TestCollapse:
    def test_strictly_decreasing_lower_bounds(self):
        values = collinear_lower_bounds(SIXTEEN_01, SIXTEEN_04, 0, (2, 3, 4, 5))
        bounds = [a for _, a in values]
        assert all(bounds[i] > bounds[i + 1] for i in range(len(bounds) - 1))
        assert bounds[0] > 1e-3

    def test_levels_below_two_rejected(self):
        with pytest.raises(ValueError):
            collinear_lower_bounds(SIXTEEN_01, SIXTEEN_04, 0, (1,))


class TestRotation:
    def test_bounds_are_theta_independent(self):
        result = rotation_experiment(3, [0, 10, 30, 45, 60, 80])
        for row in result.rows:
            assert row.status == "ok"
            assert row.lower_deviation < 1e-8
            assert row.upper_deviation < 1e-8
        assert result.base_report.lower > 0

    def test_right_angle_reports_singular_block(self):
        result = rotation_experiment(2, [90, -90])
        assert all(r.status == "singular-a4" for r in result.rows)

    def test_collapse_branch_attached(self):
        result = rotation_experiment(2, [0], collapse_levels=(2, 3))
        assert len(result.collapse) == 2
        assert result.collapse[0][1] > result.collapse[1][1]


class TestCrossBessel:
    def test_self_spectrum_stays_orthonormal(self):
        result = cross_bessel_experiment(FOUR, [0, 2], FOUR, range(1, 5))
        assert all(abs(r.upper - 1) < 1e-9 for r in result.rows)

    def test_eighth_into_quarter_grows(self):
        result = cross_bessel_experiment(EIGHT, [0, 4], FOUR, range(1, 7))
        uppers = [r.upper for r in result.rows]
        assert all(uppers[i] <= uppers[i + 1] + 1e-12 for i in range(len(uppers) - 1))
        assert uppers[-1] > 3 * uppers[0]

    def test_hand_checkable_first_level(self):
        result = cross_bessel_experiment(EIGHT, [0, 4], FOUR, [1])
        # both frequencies are integers, so they act identically on the
        # quarter-integer atoms {0, 1/4}: the Gram is rank one with trace 2
        assert abs(result.rows[0].upper - 2) < 1e-12

    def test_depth_ratio_scales_measure(self):
        result = cross_bessel_experiment(EIGHT, [0, 4], FOUR, [2], depth_ratio=2)
        assert result.rows[0].atom_count == 16
