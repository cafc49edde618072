import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rydephase.errors import DegenerateGeometryError
from rydephase.potentials import (
    CoefficientModel,
    PotentialSpec,
    characteristic_frequency,
    coefficient_for_level,
    load_coefficient_table,
    pairwise_shift,
)

TWO_PI = 2.0 * math.pi
C3_100S = TWO_PI * 1.0e5  # rad um^3 / us
C6_100S = TWO_PI * 5.3e7  # rad um^6 / us


class TestPotentialSpec:
    def test_rejects_bad_alpha_and_strength(self):
        with pytest.raises(ValueError):
            PotentialSpec(alpha=4, c_over_hbar=1.0)
        with pytest.raises(ValueError):
            PotentialSpec(alpha=3, c_over_hbar=0.0)


class TestPairwiseShift:
    def test_vdw_at_waist_scale(self):
        pot = PotentialSpec(alpha=6, c_over_hbar=C6_100S)
        delta = pairwise_shift((0.0, 0.0, 0.0), (15.0, 0.0, 0.0), pot)
        assert delta / TWO_PI == pytest.approx(4.652949245541838, rel=1e-12)
        assert delta / TWO_PI == pytest.approx(4.7, rel=0.02)

    def test_dd_at_waist_scale(self):
        pot = PotentialSpec(alpha=3, c_over_hbar=C3_100S)
        delta = pairwise_shift((0.0, 0.0, 0.0), (0.0, 15.0, 0.0), pot)
        assert delta / TWO_PI == pytest.approx(29.62962962962963, rel=1e-12)
        assert delta / TWO_PI == pytest.approx(30.0, rel=0.02)

    def test_cubic_law_halving(self):
        pot = PotentialSpec(alpha=3, c_over_hbar=C3_100S)
        near = pairwise_shift((0.0, 0.0, 0.0), (4.0, 0.0, 0.0), pot)
        far = pairwise_shift((0.0, 0.0, 0.0), (8.0, 0.0, 0.0), pot)
        assert far == pytest.approx(near / 8.0, rel=1e-12)

    def test_coincident_points_raise(self):
        pot = PotentialSpec(alpha=6, c_over_hbar=C6_100S)
        with pytest.raises(DegenerateGeometryError):
            pairwise_shift((1.0, 2.0, 3.0), (1.0, 2.0, 3.0), pot)

    @given(lam=st.floats(0.1, 10.0), r=st.floats(0.5, 50.0), t=st.floats(0.0, 10.0))
    @settings(max_examples=60, deadline=None)
    def test_phase_scale_invariance(self, lam, r, t):
        # rescaling lengths by lam and the coefficient by lam^alpha leaves
        # every accumulated phase Delta*t invariant
        for alpha in (3, 6):
            pot = PotentialSpec(alpha=alpha, c_over_hbar=C3_100S)
            scaled = PotentialSpec(alpha=alpha, c_over_hbar=C3_100S * lam**alpha)
            ph = pairwise_shift((0.0, 0.0, 0.0), (r, 0.0, 0.0), pot) * t
            ph_scaled = pairwise_shift((0.0, 0.0, 0.0), (lam * r, 0.0, 0.0), scaled) * t
            assert ph_scaled == pytest.approx(ph, rel=1e-12, abs=1e-300)


class TestCoefficientForLevel:
    def test_anchor_identity(self):
        model = CoefficientModel(kind="scaling_law", anchor_n=100, anchor_value=C6_100S)
        assert coefficient_for_level(100, model) == pytest.approx(C6_100S, rel=1e-14)

    def test_scaling_ratio_90_over_100(self):
        # (86.87/96.87)^11 evaluated exactly
        model = CoefficientModel(kind="scaling_law", anchor_n=100, anchor_value=C6_100S)
        ratio = coefficient_for_level(90, model) / coefficient_for_level(100, model)
        assert ratio == pytest.approx((86.87 / 96.87) ** 11, rel=1e-12)
        assert ratio == pytest.approx(0.3016, abs=2e-4)

    def test_strictly_increasing_in_n(self):
        model = CoefficientModel(kind="scaling_law", anchor_n=100, anchor_value=C6_100S)
        vals = [coefficient_for_level(n, model) for n in range(30, 120)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_table_interpolation_bounds(self):
        a, b = 10.0, 20.0
        model = CoefficientModel(kind="table", table=((50.0, a), (60.0, b)))
        mid = coefficient_for_level(55, model)
        assert a < mid < b

    def test_table_no_extrapolation(self):
        model = CoefficientModel(kind="table", table=((50.0, 1.0), (60.0, 2.0)))
        with pytest.raises(ValueError, match="outside table range"):
            coefficient_for_level(61, model)

    def test_n_below_quantum_defect(self):
        model = CoefficientModel(kind="scaling_law")
        with pytest.raises(ValueError):
            coefficient_for_level(3, model)

    def test_table_rows_must_increase(self):
        with pytest.raises(ValueError):
            CoefficientModel(kind="table", table=((60.0, 1.0), (50.0, 2.0)))


class TestCoefficientTableCsv:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "c6.csv"
        path.write_text("n,c_over_hbar_2pi_MHz_um_alpha\n50,1.0e6\n60,5.0e6\n100,5.3e7\n")
        table = load_coefficient_table(path)
        assert len(table) == 3
        assert table[0] == (50.0, TWO_PI * 1.0e6)
        model = CoefficientModel(kind="table", table=table)
        assert coefficient_for_level(100, model) == pytest.approx(C6_100S, rel=1e-12)

    def test_header_is_checked(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("n,c6\n50,1.0\n")
        with pytest.raises(ValueError, match="header"):
            load_coefficient_table(path)


class TestCharacteristicFrequency:
    def test_reference_frequencies(self):
        om_vdw = characteristic_frequency(PotentialSpec(6, C6_100S), 15.0)
        om_dd = characteristic_frequency(PotentialSpec(3, C3_100S), 15.0)
        assert om_vdw / TWO_PI == pytest.approx(4.652949245541838, rel=1e-12)
        assert om_dd / TWO_PI == pytest.approx(29.62962962962963, rel=1e-12)

    def test_sixth_power_scaling(self):
        pot = PotentialSpec(6, C6_100S)
        assert characteristic_frequency(pot, 30.0) == pytest.approx(
            characteristic_frequency(pot, 15.0) / 64.0, rel=1e-12
        )

    def test_sigma_positive(self):
        with pytest.raises(ValueError):
            characteristic_frequency(PotentialSpec(6, C6_100S), 0.0)
