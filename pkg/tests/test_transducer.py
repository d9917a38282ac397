"""
Tests for stage assembly and device-level evaluation
"""
import math

import numpy as np
import pytest

from transducersim.exceptions import DomainError
from transducersim.materials import bose_einstein, load_material_db
from transducersim.rates import FrequencyPlan, Geometry, LossBudget, XiTable
from transducersim.transducer import (
    SATURATED_OCCUPANCY,
    added_occupancy,
    evaluate,
    external_efficiency,
    occupancy_composition,
    single_step_point,
    two_step_point,
)
from transducersim.transducer.device import FLAG_NAMES
from transducersim.transducer.stages import eo_stage_model, ki_stage_model, solve_stage
from transducersim.utils.config import resolve_run_config

OMEGA_MU = 2 * math.pi * 8e9
OMEGA_I = 2 * math.pi * 600e9
OMEGA_PO = 2 * math.pi * 200e12
RED_DOT = Geometry(w=1e-6, L=300e-6)
LONG = Geometry(w=1e-6, L=1e-3)
SINGLE = FrequencyPlan.single_step(OMEGA_MU, OMEGA_PO)
TWO_STEP = FrequencyPlan.two_step(OMEGA_MU, OMEGA_I, OMEGA_PO)
PERFECT_SINK = {"kind": "power_law", "coefficient": 1e12, "exponent": 0.0}


class TestExternalEfficiency:
    """Test cases for the extraction product"""

    def test_no_extraction(self):
        """Test zero external coupling on either side gives zero"""
        assert external_efficiency(LossBudget(1.0, 0.0), LossBudget(1.0, 1.0)) == 0.0
        assert external_efficiency(LossBudget(1.0, 1.0), LossBudget(1.0, 0.0)) == 0.0

    def test_lossless(self):
        """Test no internal loss gives unit efficiency"""
        assert external_efficiency(LossBudget(0.0, 3.0), LossBudget(0.0, 5.0)) == 1.0

    def test_product_rule(self):
        """Test half extraction on both modes gives a quarter"""
        eta = external_efficiency(LossBudget(2.0, 2.0), LossBudget(7.0, 7.0))
        assert eta == pytest.approx(0.25)

    def test_zero_total(self):
        """Test zero total loss is a domain error"""
        with pytest.raises(DomainError):
            external_efficiency(LossBudget(0.0, 0.0), LossBudget(1.0, 1.0))

    def test_internal_loss_never_helps(self):
        """Test raising internal loss at fixed external rate never raises the efficiency"""
        optical = LossBudget(2.5e10, 1.3e11)
        values = [
            external_efficiency(LossBudget(k, 1e6), optical) for k in np.geomspace(1, 1e9, 30)
        ]
        assert all(b <= a for a, b in zip(values, values[1:]))


class TestOccupancy:
    """Test cases for added occupancy and its composition"""

    def test_composition_single_stage(self):
        """Test one stage reduces to its own occupancy"""
        assert occupancy_composition([3e-9], [0.4]) == 3e-9

    def test_composition_unit_efficiency(self):
        """Test a perfect first stage adds occupancies"""
        assert occupancy_composition([1e-9, 2e-8], [1.0, 0.5]) == pytest.approx(2.1e-8)

    def test_composition_referred_to_input(self):
        """Test the second stage is divided by the first efficiency"""
        n_total = occupancy_composition([1e-9, 1e-8], [0.93, 0.9])
        assert n_total == pytest.approx(1e-9 + 1.075e-8, rel=1e-3)
        assert n_total == pytest.approx(1e-9 + 1e-8 / 0.93, rel=1e-12)

    def test_composition_saturates(self):
        """Test noise behind a dead stage saturates instead of dividing by zero"""
        assert occupancy_composition([1e-9, 1e-8], [0.0, 0.9]) == SATURATED_OCCUPANCY
        assert occupancy_composition([1e-9, 0.0], [0.0, 0.9]) == 1e-9

    def test_composition_validation(self):
        """Test mismatched lists and out-of-range efficiencies are rejected"""
        with pytest.raises(DomainError):
            occupancy_composition([1.0], [0.5, 0.5])
        with pytest.raises(DomainError):
            occupancy_composition([1.0], [1.5])

    def test_branches(self):
        """Test the two bath weightings swap the weights"""
        loss = LossBudget(kappa_int=1.0, kappa_ext=3.0)
        values = added_occupancy(loss, OMEGA_MU, 1.0, 0.01)
        n_hot, n_cold = bose_einstein(OMEGA_MU, 1.0), bose_einstein(OMEGA_MU, 0.01)
        assert values["physical"] == pytest.approx(0.25 * n_hot + 0.75 * n_cold)
        assert values["as_printed"] == pytest.approx(0.75 * n_hot + 0.25 * n_cold)

    def test_occupancy_monotone_in_temperatures(self):
        """Test added occupancy does not decrease with either bath temperature"""
        loss = LossBudget(kappa_int=1.0, kappa_ext=3.0)
        hot = [added_occupancy(loss, OMEGA_MU, T, 0.01)["physical"] for T in (0.05, 0.2, 1.0, 3.0)]
        cold = [added_occupancy(loss, OMEGA_MU, 3.0, T)["physical"] for T in (0.01, 0.05, 0.2, 1.0)]
        assert hot == sorted(hot)
        assert cold == sorted(cold)


class TestSingleStep:
    """Test cases for the single-step transducer"""

    def setup_method(self):
        """Setup test environment"""
        self.registry = load_material_db()

    def test_converged_long_device(self):
        """Test a 1 mm device settles near 1.3 K with high efficiency"""
        point = single_step_point(LONG, SINGLE, 0.01, self.registry)
        eo = point.stage("EO")
        assert point.scheme == "single"
        assert not point.flags["runaway"]
        assert point.physical
        assert eo.thermal.converged
        assert eo.thermal.T_hot == pytest.approx(1.34, rel=0.05)
        assert point.eta_total == pytest.approx(0.838, rel=0.01)
        assert 0 < point.n_total < 1e-2

    def test_red_dot_runs_away(self):
        """Test the 300 um device is reported at the cap and marked non-physical"""
        point = single_step_point(RED_DOT, SINGLE, 0.01, self.registry)
        assert point.flags["runaway"]
        assert not point.physical
        assert math.isfinite(point.eta_total)
        assert point.stage("EO").thermal.delta_T == pytest.approx(0.9 * 13.0 - 0.01)

    def test_cold_limit(self):
        """Test a near-zero base temperature with a perfect heat sink adds no noise"""
        registry = load_material_db(
            {"materials": {"LiNbO3": {"thermal": {"g_th": PERFECT_SINK}}}}
        )
        point = single_step_point(LONG, SINGLE, 1e-3, registry)
        assert point.stage("EO").thermal.delta_T < 1e-6
        assert point.n_total < 1e-100

    def test_efficiency_peaks_inside_length_range(self):
        """Test efficiency over L at w = 1 um rises and then falls"""
        lengths = np.geomspace(10e-6, 1e-2, 7)
        eta = [
            single_step_point(Geometry(1e-6, L), SINGLE, 0.01, self.registry).eta_total
            for L in lengths
        ]
        peak = int(np.argmax(eta))
        assert 0 < peak < len(lengths) - 1

    def test_occupancy_grows_with_base_temperature(self):
        """Test n_total is non-decreasing in the base temperature"""
        values = [
            single_step_point(LONG, SINGLE, T, self.registry).n_total for T in (0.01, 0.1, 0.3)
        ]
        assert values == sorted(values)

    def test_branch_toggle(self):
        """Test the reported occupancy follows the selected branch"""
        physical = single_step_point(LONG, SINGLE, 0.01, self.registry)
        printed = single_step_point(LONG, SINGLE, 0.01, self.registry, branch="as_printed")
        assert physical.n_total == physical.n_total_physical
        assert printed.n_total == printed.n_total_as_printed
        assert printed.n_total_physical == pytest.approx(physical.n_total_physical)
        assert printed.n_total > physical.n_total

    def test_overlap_table(self):
        """Test an overlap table below one reduces coupling and sets the flag"""
        table = XiTable(((2 * math.pi * 1e9, 0.5), (2 * math.pi * 1e12, 0.5)))
        point = single_step_point(LONG, SINGLE, 0.01, self.registry, xi=table)
        reference = single_step_point(LONG, SINGLE, 0.01, self.registry)
        assert point.couplings.xi == pytest.approx(0.5)
        assert point.couplings.g_EO == pytest.approx(reference.couplings.g_EO / 2)
        assert point.flags["overlap_degraded"]
        assert not reference.flags["overlap_degraded"]

    def test_geometry_flags(self):
        """Test narrow and stubby devices carry their flags"""
        point = single_step_point(Geometry(0.5e-6, 4e-6), SINGLE, 0.01, self.registry)
        assert point.flags["cutoff"]
        assert point.flags["aspect"]

    def test_cutoff_flag_boundary(self):
        """Test the cutoff flag switches exactly at the in-medium pump wavelength"""
        w_cut = self.registry.optical("LiNbO3").optical_cutoff_width(OMEGA_PO)
        narrow = Geometry(float(np.nextafter(w_cut, 0.0)), 1e-3)
        below = single_step_point(narrow, SINGLE, 0.01, self.registry)
        at = single_step_point(Geometry(w_cut, 1e-3), SINGLE, 0.01, self.registry)
        above = single_step_point(Geometry(w_cut * 1.01, 1e-3), SINGLE, 0.01, self.registry)
        assert below.flags["cutoff"]
        assert not at.flags["cutoff"]
        assert not above.flags["cutoff"]

    def test_noise_falls_toward_cutoff(self):
        """Test the added occupancy does not grow as w shrinks toward the cutoff width"""
        w_cut = self.registry.optical("LiNbO3").optical_cutoff_width(OMEGA_PO)
        widths = np.geomspace(1.2e-6, 1.05 * w_cut, 5)
        points = [single_step_point(Geometry(w, 1e-3), SINGLE, 0.01, self.registry) for w in widths]
        occupancies = [p.n_total for p in points if p.physical]
        assert len(occupancies) >= 3
        assert all(b <= a for a, b in zip(occupancies, occupancies[1:]))

    def test_wrong_plan(self):
        """Test the single-step evaluator refuses a two-step plan"""
        with pytest.raises(DomainError):
            single_step_point(LONG, TWO_STEP, 0.01, self.registry)


class TestTwoStep:
    """Test cases for the two-step transducer"""

    def setup_method(self):
        """Setup test environment"""
        self.registry = load_material_db()

    def test_converged_long_device(self):
        """Test both stages of a 1 mm device converge"""
        point = two_step_point(LONG, LONG, TWO_STEP, 0.01, 0.01, self.registry)
        ki, eo = point.stage("KI"), point.stage("EO")
        assert [s.name for s in point.stages] == ["KI", "EO"]
        assert point.physical
        assert ki.thermal.converged and eo.thermal.converged
        assert ki.thermal.delta_T < 1e-6
        assert eo.thermal.T_hot == pytest.approx(1.34, rel=0.05)
        assert point.eta_total == pytest.approx(ki.eta_ext * eo.eta_ext, rel=1e-12)
        assert point.eta_total == pytest.approx(0.838, rel=0.01)
        assert point.couplings.g_KI > 0

    def test_two_step_suppresses_noise(self):
        """Test the intermediate band cuts the added noise by orders of magnitude"""
        single = single_step_point(LONG, SINGLE, 0.01, self.registry)
        two = two_step_point(LONG, LONG, TWO_STEP, 0.01, 0.01, self.registry)
        assert two.n_total <= 1e-3 * single.n_total

    def test_red_dot_flagged(self):
        """Test the 300 um device reports finite values behind the runaway flag"""
        point = two_step_point(RED_DOT, RED_DOT, TWO_STEP, 0.01, 0.01, self.registry)
        assert point.flags["runaway"]
        assert not point.physical
        assert math.isfinite(point.eta_total)
        assert math.isfinite(point.n_total)

    def test_trend_over_intermediate_frequency(self):
        """Test noise falls and efficiency rises with the intermediate frequency"""
        etas, occupancies = [], []
        for f_i in np.geomspace(100e9, 1e12, 6):
            plan = FrequencyPlan.two_step(OMEGA_MU, 2 * math.pi * f_i, OMEGA_PO)
            point = two_step_point(LONG, LONG, plan, 0.01, 0.01, self.registry)
            assert point.physical
            etas.append(point.eta_total)
            occupancies.append(point.n_total)
        assert np.all(np.diff(etas) >= -1e-12)
        assert np.all(np.diff(occupancies) <= 1e-12 * max(occupancies))

    def test_record_columns(self):
        """Test the flat record carries per-stage and flag columns"""
        point = two_step_point(LONG, LONG, TWO_STEP, 0.01, 0.01, self.registry)
        record = point.to_record()
        assert record["scheme"] == "two_step"
        assert record["T2_K"] == 0.01
        assert record["w_ki_m"] == 1e-6
        for prefix in ("ki", "eo"):
            assert f"{prefix}_dT_K" in record
            assert f"{prefix}_eta_ext" in record
        for name in FLAG_NAMES:
            assert f"flag_{name}" in record
        assert record["eta_total"] == point.eta_total

    def test_stage_models_share_cap(self):
        """Test both stages are capped at 0.9 Tc of the superconductor"""
        ki = ki_stage_model(LONG, TWO_STEP, self.registry, 0.01)
        eo = eo_stage_model(LONG, TWO_STEP, self.registry, 0.01)
        assert ki.T_max == pytest.approx(0.9 * 13.0)
        assert eo.T_max == ki.T_max
        assert solve_stage(ki).name == "KI"

    def test_one_kelvin_operation(self):
        """Test a 1 mm device at a 1 K optical-stage bath stays efficient and quiet"""
        for f_i in np.geomspace(300e9, 1e12, 4):
            plan = FrequencyPlan.two_step(OMEGA_MU, 2 * math.pi * f_i, OMEGA_PO)
            point = two_step_point(LONG, LONG, plan, 0.01, 1.0, self.registry)
            assert not point.flags["runaway"]
            assert point.stage("EO").thermal.T_hot > 1.0
            assert point.eta_total > 0.5
            assert 0 <= point.n_total < 1e-3

    def test_one_kelvin_red_dot_flagged(self):
        """Test the 300 um device at a 1 K bath is still reported behind the runaway flag"""
        point = two_step_point(RED_DOT, RED_DOT, TWO_STEP, 0.01, 1.0, self.registry)
        assert point.flags["runaway"]
        assert math.isfinite(point.eta_total)
        assert math.isfinite(point.n_total)

    def test_wrong_plan(self):
        """Test the two-step evaluator needs an intermediate band"""
        with pytest.raises(DomainError):
            two_step_point(LONG, LONG, SINGLE, 0.01, 0.01, self.registry)


class TestEvaluate:
    """Test cases for evaluation from a run configuration"""

    def test_matches_direct_call(self):
        """Test a configuration evaluates to the same point as a direct call"""
        registry = load_material_db()
        config = resolve_run_config(
            {"scheme": "two_step", "frequencies": {"f_i": "600GHz"}, "geometry": {"L": "1mm"}}
        )
        point = evaluate(config, registry)
        direct = two_step_point(LONG, LONG, TWO_STEP, 0.01, 0.01, registry)
        assert point.eta_total == pytest.approx(direct.eta_total, rel=1e-12)
        assert point.n_total == pytest.approx(direct.n_total, rel=1e-9)


class TestOutputRanges:
    """Test cases for the efficiency and occupancy ranges over random inputs"""

    def test_stage_quantities_in_range(self):
        """Test efficiency stays in [0, 1] and occupancy non-negative on random stages"""
        rng = np.random.default_rng(2024)
        for _ in range(10_000):
            low = LossBudget(*10 ** rng.uniform(-2, 12, size=2))
            high = LossBudget(*10 ** rng.uniform(-2, 12, size=2))
            omega = 2 * math.pi * 10 ** rng.uniform(9, 12.5)
            T_base = 10 ** rng.uniform(-3, 0.5)
            T_hot = T_base + 10 ** rng.uniform(-6, 1)

            eta = external_efficiency(low, high)
            occupancy = added_occupancy(low, omega, T_hot, T_base)
            assert 0.0 <= eta <= 1.0
            assert occupancy["physical"] >= 0.0
            assert occupancy["as_printed"] >= 0.0
            assert occupancy_composition([occupancy["physical"]] * 2, [eta, eta]) >= 0.0

    def test_device_points_in_range(self):
        """Test random single-step and two-step devices report bounded values"""
        registry = load_material_db()
        rng = np.random.default_rng(11)
        for _ in range(20):
            geom = Geometry(w=10 ** rng.uniform(-6.7, -4.7), L=10 ** rng.uniform(-5, -2))
            T = 10 ** rng.uniform(-2, 0)
            plan = FrequencyPlan.two_step(
                OMEGA_MU, 2 * math.pi * 10 ** rng.uniform(10.5, 12), OMEGA_PO
            )
            for point in (
                single_step_point(geom, SINGLE, T, registry),
                two_step_point(geom, geom, plan, T, T, registry),
            ):
                assert 0.0 <= point.eta_total <= 1.0
                assert point.n_total >= 0.0
                assert math.isfinite(point.n_total)
