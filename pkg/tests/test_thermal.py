"""
Tests for the heating laws and the self-consistent heating solver
"""
import math

import numpy as np
import pytest

from transducersim.exceptions import DomainError, SolverError
from transducersim.materials import load_material_db, sc_conductivity
from transducersim.materials.constants import HBAR
from transducersim.materials.laws import PowerLaw
from transducersim.rates import Geometry, pump_photons_eo, pump_photons_ki
from transducersim.thermal import (
    HeatingInputs,
    HeatingStage,
    dT_scaling_eo,
    dT_scaling_ki,
    solve_self_consistent_dT,
    steady_state_dT,
    transient_heating,
)

OMEGA_PO = 2 * math.pi * 200e12
T_MAX = 0.9 * 13.0
UNIT = PowerLaw(1.0, 0.0)


def synthetic_stage(rhs_of_dT, T_base=0.01, omega=1.0 / HBAR, name="synthetic"):
    """Stage whose heating equals rhs_of_dT(T - T_base) for unit conductance"""
    return HeatingStage(
        name=name,
        pump_photons=lambda T: rhs_of_dT(np.asarray(T) - T_base),
        pump_absorption=lambda T: 1.0,
        omega_pump=omega,
        g_th_law=UNIT,
        L=1.0,
        T_base=T_base,
        T_max=T_MAX,
    )


class TestHeatingLaws:
    """Test cases for steady-state and transient heating"""

    def setup_method(self):
        """Setup test environment"""
        self.inputs = HeatingInputs(
            pump_photons=1e6,
            omega_pump=OMEGA_PO,
            kappa_pump_abs=2.52e10,
            g_th_law=PowerLaw(4e-6, 0.0),
            L=3e-4,
            T_eval=0.01,
        )

    def test_steady_state_golden(self):
        """Test the steady-state rise for 1e6 photons at 200 THz"""
        expected = 1e6 * HBAR * OMEGA_PO * 2.52e10 / (4e-6 * 3e-4)
        assert steady_state_dT(self.inputs) == pytest.approx(expected, rel=1e-12)
        assert steady_state_dT(self.inputs) == pytest.approx(2.783e6, rel=1e-3)

    def test_no_pump_no_heating(self):
        """Test zero pump photons give zero rise"""
        inputs = HeatingInputs(0.0, OMEGA_PO, 2.52e10, PowerLaw(4e-6, 0.0), 3e-4, 0.01)
        assert steady_state_dT(inputs) == 0.0

    def test_inverse_in_conductivity(self):
        """Test scaling g_th by 1e6 divides the rise by 1e6"""
        stiff = HeatingInputs(1e6, OMEGA_PO, 2.52e10, PowerLaw(4.0, 0.0), 3e-4, 0.01)
        expected = steady_state_dT(self.inputs) / 1e6
        assert steady_state_dT(stiff) == pytest.approx(expected, rel=1e-12)

    def test_conductance_at_evaluation_temperature(self):
        """Test g_th is taken at T_eval"""
        inputs = HeatingInputs(1.0, OMEGA_PO, 1.0, PowerLaw(4.0, 3.0), 1e-3, 0.5)
        assert inputs.G_th == pytest.approx(4.0 * 0.125 * 1e-3)

    def test_transient(self):
        """Test the transient rise at zero, one time constant and infinity"""
        material = load_material_db().thermal("LiNbO3")
        geom = Geometry(1e-6, 3e-4)
        inputs = HeatingInputs.from_geometry(1e6, OMEGA_PO, 2.52e10, material, geom, 0.5)
        steady = steady_state_dT(inputs)
        assert transient_heating(inputs, 0.0) == 0.0
        assert transient_heating(inputs, math.inf) == steady
        one_tau = transient_heating(inputs, inputs.tau_th)
        assert one_tau == pytest.approx((1 - math.exp(-1)) * steady, rel=1e-12)

    def test_time_constant(self):
        """Test tau_th = rho c_th w^2 L / (g_th L)"""
        material = load_material_db().thermal("LiNbO3")
        geom = Geometry(1e-6, 3e-4)
        inputs = HeatingInputs.from_geometry(1.0, OMEGA_PO, 1.0, material, geom, 0.5)
        expected = 4640.0 * 2.705e-4 * 0.125 * geom.volume / (4.0 * 0.125 * geom.L)
        assert inputs.tau_th == pytest.approx(expected, rel=1e-12)

    def test_transient_needs_heat_capacity(self):
        """Test the transient law refuses inputs without C_th"""
        with pytest.raises(DomainError):
            transient_heating(self.inputs, 1e-3)
        with pytest.raises(DomainError):
            transient_heating(self.inputs, -1.0)

    def test_invalid_inputs(self):
        """Test negative photon numbers are rejected"""
        with pytest.raises(DomainError):
            HeatingInputs(-1.0, OMEGA_PO, 1.0, UNIT, 1e-3, 0.01)


class TestSolver:
    """Test cases for the self-consistent heating solver"""

    def test_no_heating(self):
        """Test zero heating returns zero without iterating"""
        solution = solve_self_consistent_dT(synthetic_stage(lambda d: 0.0 * d))
        assert solution.delta_T == 0.0
        assert solution.converged
        assert solution.iterations == 0

    def test_linear_feedback(self):
        """Test a linear feedback law against its closed form"""
        solution = solve_self_consistent_dT(synthetic_stage(lambda d: 0.01 + 0.5 * d))
        assert solution.converged
        assert not solution.runaway
        assert solution.delta_T == pytest.approx(0.02, abs=1e-9)
        assert solution.T_hot == pytest.approx(0.03, abs=1e-9)

    def test_runaway(self):
        """Test heating exceeding conduction everywhere is a runaway"""
        solution = solve_self_consistent_dT(synthetic_stage(lambda d: 100.0 + d))
        assert solution.runaway
        assert not solution.converged
        assert solution.delta_T == pytest.approx(T_MAX - 0.01)
        assert solution.bracket == (0.0, pytest.approx(T_MAX - 0.01))

    def test_cold_root_kept(self):
        """Test the smallest of two roots is returned and flagged"""
        solution = solve_self_consistent_dT(synthetic_stage(lambda d: 0.1 + d**2))
        assert solution.multi_root
        assert solution.converged
        assert solution.delta_T == pytest.approx((1 - math.sqrt(0.6)) / 2, abs=1e-9)

    def test_stiff_conductance(self):
        """Test a 1e6 times stiffer conductance leaves a sub-microkelvin rise"""
        stage = HeatingStage(
            name="stiff",
            pump_photons=lambda T: 1e-3 * (np.asarray(T) / 0.01),
            pump_absorption=lambda T: 1.0,
            omega_pump=1.0 / HBAR,
            g_th_law=PowerLaw(1e6, 0.0),
            L=1.0,
            T_base=0.01,
            T_max=T_MAX,
        )
        solution = solve_self_consistent_dT(stage)
        assert solution.converged
        assert solution.delta_T < 1e-6

    def test_residual_and_idempotence(self):
        """Test the returned rise reproduces itself within tolerance"""
        stage = synthetic_stage(lambda d: 0.003 * (1 + d / 0.01) ** 0.5)
        solution = solve_self_consistent_dT(stage)
        assert solution.converged
        assert solution.residual <= 1e-6
        assert abs(stage.rhs(solution.delta_T) - solution.delta_T) <= 1e-6

    def test_monotone_in_pump_frequency(self):
        """Test a higher pump frequency never lowers the solved rise"""
        previous = 0.0
        for scale in (0.5, 1.0, 2.0, 4.0):
            stage = synthetic_stage(lambda d: 1e-3 * (1 + d / 0.01) ** 0.5, omega=scale / HBAR)
            delta_T = solve_self_consistent_dT(stage).delta_T
            assert delta_T >= previous
            previous = delta_T

    def test_matches_exhaustive_scan(self):
        """Test 100 random stages against a 1e6-point scan of the same bracket"""
        rng = np.random.default_rng(7)
        for _ in range(100):
            a = 10 ** rng.uniform(-5, -2)
            m = rng.uniform(0.0, 0.8)
            T_base = 10 ** rng.uniform(math.log10(5e-3), math.log10(0.5))
            stage = synthetic_stage(
                lambda d, a=a, m=m, T_base=T_base: a * (1 + d / T_base) ** m, T_base=T_base
            )

            solution = solve_self_consistent_dT(stage)
            grid = np.linspace(0.0, T_MAX - T_base, 1_000_001)
            f = grid - stage.rhs(grid)
            crossing = np.flatnonzero((f[:-1] < 0) & (f[1:] >= 0))
            assert crossing.size > 0
            scan_root = grid[crossing[0]]
            step = grid[1] - grid[0]

            assert solution.converged
            assert solution.residual <= 1e-6
            assert abs(solution.delta_T - scan_root) <= 2 * step

    def test_law_failure_carries_temperature(self):
        """Test a conductivity law failing above Tc names the failing temperature"""
        nbn = load_material_db().superconductor("NbN")
        omega = 2 * math.pi * 8e9
        stage = HeatingStage(
            name="ki",
            pump_photons=lambda T: 1e6,
            pump_absorption=lambda T: omega * sc_conductivity(nbn, omega, T).ratio,
            omega_pump=omega,
            g_th_law=PowerLaw(1e-12, 0.0),
            L=1e-3,
            T_base=0.5,
            T_max=20.0,
        )
        with pytest.raises(SolverError) as excinfo:
            solve_self_consistent_dT(stage)
        assert excinfo.value.temperature >= 13.0

    def test_base_above_cap(self):
        """Test a base temperature above the cap is a solver error"""
        stage = HeatingStage("hot", lambda T: 1.0, lambda T: 1.0, 1.0, UNIT, 1.0, 12.0, T_MAX)
        with pytest.raises(SolverError):
            solve_self_consistent_dT(stage)


class TestOpenLoopScaling:
    """Test cases for the open-loop per-stage estimates"""

    def test_zero_absorption(self):
        """Test no pump absorption means no rise"""
        assert dT_scaling_eo(3.55e5, 1e8, 4e11, OMEGA_PO, 0.0, 4e-6, 3e-4) == 0.0

    def test_eo_formula(self):
        """Test the EO estimate composes unit-cooperativity photons into the steady state"""
        photons = pump_photons_eo(3.55e5, 1e8, 4e11)
        expected = photons * HBAR * OMEGA_PO * 2.52e10 / (4e-6 * 3e-4)
        estimate = dT_scaling_eo(3.55e5, 1e8, 4e11, OMEGA_PO, 2.52e10, 4e-6, 3e-4)
        assert estimate == pytest.approx(expected, rel=1e-12)

    def test_ki_formula(self):
        """Test the KI estimate uses the square-root pump requirement"""
        omega_pi = 2 * math.pi * 296e9
        photons = pump_photons_ki(40.0, 1e6, 1e8)
        expected = photons * HBAR * omega_pi * 1e-3 / (5e-3 * 3e-4)
        estimate = dT_scaling_ki(40.0, 1e6, 1e8, omega_pi, 1e-3, 5e-3, 3e-4)
        assert estimate == pytest.approx(expected, rel=1e-12)

    def test_frozen_laws_match_solver(self):
        """Test the solver collapses to the open-loop estimate for temperature-independent laws"""
        g_eo, kappa_low, kappa_o, kappa_abs = 3.55e5, 1e8, 4e11, 2.52e10
        g_th, L = 5e4, 1e-3
        stage = HeatingStage(
            name="eo",
            pump_photons=lambda T: pump_photons_eo(g_eo, kappa_low, kappa_o),
            pump_absorption=lambda T: kappa_abs,
            omega_pump=OMEGA_PO,
            g_th_law=PowerLaw(g_th, 0.0),
            L=L,
            T_base=0.01,
            T_max=T_MAX,
        )
        estimate = dT_scaling_eo(g_eo, kappa_low, kappa_o, OMEGA_PO, kappa_abs, g_th, L)
        solution = solve_self_consistent_dT(stage)
        assert solution.converged
        assert solution.delta_T == pytest.approx(estimate, rel=1e-9)
        assert stage.open_loop() == pytest.approx(estimate, rel=1e-12)
