"""Truncated-Fock machinery: basis bookkeeping, generators, thermal states,
unitaries and the truncation guards."""

import math

import numpy as np
import pytest

from su11otto.core import InterferometerAngles, ProtocolEndpoints, chi_of, theta_of
from su11otto.errors import TruncationError
from su11otto.fock import (
    FockWorkspace,
    boundary_occupancy,
    build_generators,
    evolution_endpoint,
    expect,
    hamiltonian_final,
    number_operator,
    thermal_state,
    unitary_equiv,
    unitary_product,
    variance,
)
from su11otto.gate import _algebra_records

MEAN_N_BETA_HALF = 3.0829881650735965683  # coth(0.25) - 1


class TestWorkspace:
    def test_dimensions(self):
        ws = FockWorkspace(7)
        assert ws.dim == 64
        assert len(ws.sectors) == 15
        assert sum(s.size for s in ws.sectors) == ws.dim

    def test_index_bookkeeping(self):
        ws = FockWorkspace(5)
        seen = set()
        for s in ws.sectors:
            assert np.all(s.n1 - s.n2 == s.d)
            assert np.all(s.idx == s.n1 * 6 + s.n2)
            seen.update(s.idx.tolist())
        assert seen == set(range(ws.dim))

    def test_interior_mask_layers(self):
        ws = FockWorkspace(3)
        assert ws.interior_mask(1).sum() == 9  # states with n1, n2 <= 2
        assert ws.interior_mask(2).sum() == 4


class TestGenerators:
    def test_vacuum_kz_eigenvalue(self):
        gen = build_generators(FockWorkspace(4))
        assert gen.kz.to_dense()[0, 0].real == 0.5

    def test_kz_is_half_n_plus_one(self):
        ws = FockWorkspace(6)
        gen = build_generators(ws)
        assert np.array_equal(
            gen.kz.to_dense(), (gen.n.to_dense() + np.eye(ws.dim)) / 2.0
        )

    def test_ladder_representation(self):
        ws = FockWorkspace(5)
        gen = build_generators(ws)
        a1, a2 = gen.a1, gen.a2
        kx_ref = (a1.conj().T @ a2.conj().T + a1 @ a2) / 2.0
        ky_ref = 1j * (a1 @ a2 - a1.conj().T @ a2.conj().T) / 2.0
        n_ref = a1.conj().T @ a1 + a2.conj().T @ a2
        assert np.max(np.abs(gen.kx.to_dense() - kx_ref)) < 1e-14
        assert np.max(np.abs(gen.ky.to_dense() - ky_ref)) < 1e-14
        assert np.max(np.abs(gen.n.to_dense() - n_ref)) < 1e-14

    def test_algebra_suite_passes_at_small_basis(self):
        records = _algebra_records(12)
        assert all(r.status == "pass" for r in records)


class TestThermalState:
    def test_zero_temperature_is_vacuum(self):
        ws = FockWorkspace(20)
        state = thermal_state(ws, 1e3, 1.0)
        assert state.mean_number() == pytest.approx(0.0, abs=1e-12)
        vac = [p[0] for s, p in zip(ws.sectors, state.probs) if s.d == 0]
        assert vac[0] == pytest.approx(1.0, abs=1e-12)

    def test_mean_occupation_matches_closed_form(self):
        state = thermal_state(FockWorkspace(60), 0.5, 1.0)
        assert state.mean_number() == pytest.approx(MEAN_N_BETA_HALF, abs=1e-7)

    def test_trace_normalized_and_leakage_reported(self):
        ws = FockWorkspace(120)
        state = thermal_state(ws, 0.25, 1.0)
        assert sum(float(p.sum()) for p in state.probs) == pytest.approx(1.0, abs=1e-14)
        # geometric tail: 1 - (1 - q^(n_max+1))^2 with q = exp(-beta omega)
        q = math.exp(-0.25)
        assert state.leakage == pytest.approx(
            1.0 - (1.0 - q**121) ** 2, rel=1e-3
        )
        assert state.leakage < 1e-10

    def test_partition_function_closed_form(self):
        state = thermal_state(FockWorkspace(60), 0.5, 1.0)
        assert state.partition_function == pytest.approx(
            (2.0 * math.sinh(0.25)) ** -2, rel=1e-15
        )

    def test_undersized_basis_rejected(self):
        with pytest.raises(TruncationError):
            thermal_state(FockWorkspace(10), 0.25, 1.0)


class TestUnitaries:
    def test_zero_squeezing_is_pure_phase(self):
        ws = FockWorkspace(8)
        u = unitary_product(InterferometerAngles(zeta=0.0, phi=0.7), ws)
        for block, kz in zip(u.blocks, ws.kz_diags):
            assert np.max(np.abs(block - np.diag(np.exp(-0.7j * kz)))) < 1e-14

    def test_zero_phase_is_identity(self):
        ws = FockWorkspace(8)
        u = unitary_product(InterferometerAngles(zeta=1.1, phi=0.0), ws)
        for block in u.blocks:
            assert np.max(np.abs(block - np.eye(block.shape[0]))) < 1e-12

    def test_zero_chi_equiv_is_identity(self):
        ws = FockWorkspace(8)
        u = unitary_equiv(ProtocolEndpoints(chi=0.0, theta=1.2), ws)
        for block in u.blocks:
            assert np.max(np.abs(block - np.eye(block.shape[0]))) < 1e-13

    def test_pure_phase_endpoint_preserves_diagonal_averages(self):
        ws = FockWorkspace(30)
        state = thermal_state(ws, 1.0, 1.0)
        u = evolution_endpoint(0.0, 1.3, ws, state=state)
        m = u.dag() @ (number_operator(ws) @ u)
        m.hermitian = True
        assert expect(m, state) == pytest.approx(state.mean_number(), abs=1e-12)

    def test_unitarity_defects(self):
        ws = FockWorkspace(30)
        for u in (
            unitary_product(InterferometerAngles(zeta=0.8, phi=0.7), ws),
            unitary_equiv(ProtocolEndpoints(chi=0.9, theta=0.4), ws),
            evolution_endpoint(-0.9, -0.4, ws),
        ):
            assert u.unitarity_defect() < 1e-12

    def test_three_forms_share_diagonal_averages(self):
        ws = FockWorkspace(40)
        state = thermal_state(ws, 1.0, 1.0)
        zeta, phi = 0.5, 1.1
        chi, theta = float(chi_of(zeta, phi)), float(theta_of(zeta, phi))
        means = []
        for u in (
            unitary_product(InterferometerAngles(zeta, phi), ws, state=state),
            unitary_equiv(ProtocolEndpoints(chi, theta), ws, state=state),
            evolution_endpoint(-chi, -theta, ws, state=state),
        ):
            m = u.dag() @ (number_operator(ws) @ u)
            m.hermitian = True
            means.append(expect(m, state))
        analytic = (state.mean_number() + 1.0) * math.cosh(chi) - 1.0
        assert means[0] == pytest.approx(means[1], abs=1e-10)
        assert means[1] == pytest.approx(means[2], abs=1e-12)
        assert means[1] == pytest.approx(analytic, abs=1e-9)

    def test_truncation_guard_trips_on_aggressive_squeezing(self):
        ws = FockWorkspace(28)
        state = thermal_state(ws, 1.0, 1.0)  # fits comfortably unsqueezed
        with pytest.raises(TruncationError):
            unitary_product(InterferometerAngles(zeta=2.5, phi=1.0), ws, state=state)

    def test_boundary_occupancy_small_in_guarded_regime(self):
        ws = FockWorkspace(60)
        state = thermal_state(ws, 1.0, 1.0)
        u = unitary_equiv(ProtocolEndpoints(chi=0.6, theta=0.0), ws, state=state)
        assert boundary_occupancy(u, state) < 1e-12


class TestHamiltonianFinal:
    def test_reduces_to_number_form_at_zero_fy(self):
        ws = FockWorkspace(10)
        h = hamiltonian_final(0.7, 0.0, ws)
        for block, nd in zip(h.blocks, ws.n_diags):
            assert np.max(np.abs(block - 0.7 * np.diag(nd + 1.0))) < 1e-14

    def test_thermal_average_closed_form(self):
        ws = FockWorkspace(60)
        beta, omega_i, omega_f, chi = 1.0, 1.0, 0.35, 0.9
        state = thermal_state(ws, beta, omega_i)
        h = hamiltonian_final(omega_f, -chi, ws)
        analytic = omega_f * math.cosh(chi) / math.tanh(beta * omega_i / 2.0)
        assert expect(h, state) == pytest.approx(analytic, abs=1e-9)

    def test_variance_is_affine_image_of_number_variance(self):
        ws = FockWorkspace(80)
        beta, omega_f, chi = 0.5, 0.1, 0.36057837857760945
        state = thermal_state(ws, beta, 1.0)
        h = hamiltonian_final(omega_f, -chi, ws)
        coth = 1.0 / math.tanh(beta / 2.0)
        expected = omega_f**2 * 0.5 * (math.cosh(2 * chi) * coth**2 - 1.0)
        assert variance(h, state) == pytest.approx(expected, rel=1e-9)


class TestExpectations:
    def test_vacuum_number_expectation(self):
        ws = FockWorkspace(20)
        state = thermal_state(ws, 1e3, 1.0)
        assert expect(number_operator(ws), state) == pytest.approx(0.0, abs=1e-12)

    def test_thermal_number_expectation(self):
        ws = FockWorkspace(60)
        state = thermal_state(ws, 0.5, 1.0)
        assert expect(number_operator(ws), state) == pytest.approx(
            MEAN_N_BETA_HALF, abs=1e-7
        )

    def test_workspace_mismatch_rejected(self):
        ws_a, ws_b = FockWorkspace(10), FockWorkspace(12)
        state = thermal_state(ws_b, 3.0, 1.0)
        with pytest.raises(ValueError):
            expect(number_operator(ws_a), state)

    def test_dense_assembly_guard(self):
        op = number_operator(FockWorkspace(80))
        with pytest.raises(ValueError):
            op.to_dense()

    def test_diagonal_fast_path_matches_generic(self):
        ws = FockWorkspace(12)
        gen = build_generators(ws)
        diag = number_operator(ws)
        lhs = (diag @ gen.kx).to_dense()
        rhs = diag.to_dense() @ gen.kx.to_dense()
        assert np.max(np.abs(lhs - rhs)) < 1e-14
