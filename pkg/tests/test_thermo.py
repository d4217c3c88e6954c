import math

import numpy as np
import pytest

from cohcool.bounds import inverse_temperature, thermal_qubit
from cohcool.errors import InvalidParameter
from cohcool.hbac import (
    HbacConfig,
    coherent_reset_state,
    compression_unitary,
    hbac_iterate,
    initial_target_state,
)
from cohcool.qcore import DensityMatrix, hermitize, partial_trace, tensor
from cohcool.thermo import (
    coherent_energetic,
    coherent_heat_direct,
    cycle_energetics,
    qubit_hamiltonian,
    spectral_amplitudes,
    thermo_series,
)

LAM = 0.375  # (1 - 0.25)/2 for the eps2 = eps3 = 0.5 bath pair


def compression_step(target, reset):
    u = compression_unitary()
    before = tensor(target, reset)
    after = DensityMatrix(
        hermitize(u @ before.data @ u.conj().T), subsystem_dims=(2, 2, 2)
    )
    return before, after


# ---------------------------------------------------------------------------
# Spectral amplitudes


def test_spectral_amplitudes_diagonal_state():
    h = qubit_hamiltonian(1.0)
    p, c2 = spectral_amplitudes(thermal_qubit(0.6), h)
    # state eigenbasis == energy eigenbasis: amplitudes are a permutation
    assert np.allclose(np.sort(c2.flatten()), [0, 0, 1, 1], atol=1e-14)
    assert np.allclose(np.sort(p), [0.2, 0.8], atol=1e-14)


def test_spectral_amplitudes_unbiased_state():
    h = qubit_hamiltonian(1.0)
    plus = DensityMatrix(np.array([[0.75, 0.25], [0.25, 0.25]], dtype=complex))
    p, c2 = spectral_amplitudes(plus, h)
    assert np.allclose(c2.sum(axis=0), [1.0, 1.0], atol=1e-13)
    assert np.allclose(c2.sum(axis=1), [1.0, 1.0], atol=1e-13)


def test_spectral_amplitudes_x_eigenstate_gives_half():
    h = qubit_hamiltonian(1.0)
    plus = DensityMatrix(0.5 * np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex))
    _, c2 = spectral_amplitudes(plus, h)
    assert np.allclose(c2, 0.25 + 0.25 * np.ones((2, 2)), atol=1e-12)


def test_spectral_amplitudes_degenerate_tiebreak():
    # A maximally mixed state has no eigenbasis of its own; the tie-break
    # adopts the energy basis (ascending), making the amplitudes trivial.
    h = qubit_hamiltonian(1.0)
    mixed = DensityMatrix(0.5 * np.eye(2, dtype=complex))
    p, c2 = spectral_amplitudes(mixed, h)
    assert np.allclose(p, [0.5, 0.5], atol=1e-15)
    assert np.allclose(c2, [[0.0, 1.0], [1.0, 0.0]], atol=1e-15)


def test_spectral_amplitudes_rejects_larger_systems():
    with pytest.raises(InvalidParameter):
        spectral_amplitudes(np.eye(4, dtype=complex) / 4.0, np.eye(4, dtype=complex))


# ---------------------------------------------------------------------------
# Energetics of a single compression


def test_cycle_energetics_identity_step():
    reset = coherent_reset_state(0.5, 0.5, 0.0, 0.0)
    before = tensor(thermal_qubit(0.3), reset)
    q, w = cycle_energetics(before, before, 1.0)
    assert q == 0.0
    assert w == 0.0


def test_first_cycle_extracts_heat_from_cold_start():
    reset = coherent_reset_state(0.5, 0.5, 0.0, 0.0)
    before, after = compression_step(thermal_qubit(0.0), reset)
    q, w = cycle_energetics(before, after, 1.0)
    assert q == pytest.approx(-0.25, abs=1e-14)  # -(omega/2) * eps_v * (1 - lam)
    assert w == pytest.approx(0.25, abs=1e-14)


def test_balanced_swap_moves_no_energy():
    # A target already at the virtual polarization is in detailed balance
    # with the pair: the compression has nothing to exchange.
    reset = coherent_reset_state(0.5, 0.5, 0.0, 0.0)
    before, after = compression_step(thermal_qubit(0.8), reset)
    q, w = cycle_energetics(before, after, 1.0)
    assert abs(q) < 1e-14
    assert abs(w) < 1e-14


def test_work_is_minus_heat_for_equal_gaps():
    # All three qubits share one level splitting, and the compression is a
    # permutation: total energy is conserved, so W = -Q exactly.
    rng = np.random.default_rng(40)
    reset = coherent_reset_state(0.4, 0.7, 0.6, 1.1)
    for _ in range(10):
        eps1 = float(rng.uniform(-0.9, 0.9))
        before, after = compression_step(thermal_qubit(eps1), reset)
        q, w = cycle_energetics(before, after, 1.0)
        assert w == pytest.approx(-q, abs=1e-14)


def test_energetics_from_total_hamiltonian():
    # Cross-check the marginal bookkeeping against H_total on the 8-dim space.
    omega = 1.7
    h1 = qubit_hamiltonian(omega)
    eye = np.eye(2, dtype=complex)
    h_total = (
        np.kron(np.kron(h1, eye), eye)
        + np.kron(np.kron(eye, h1), eye)
        + np.kron(np.kron(eye, eye), h1)
    )
    reset = coherent_reset_state(0.5, 0.5, 0.8, 0.4)
    before, after = compression_step(thermal_qubit(0.2), reset)
    _, w = cycle_energetics(before, after, omega)
    w_direct = float(np.trace(h_total @ (after.data - before.data)).real)
    assert w == pytest.approx(w_direct, abs=1e-12)


def test_cycle_energetics_requires_three_qubits():
    with pytest.raises(InvalidParameter):
        cycle_energetics(thermal_qubit(0.1), thermal_qubit(0.2), 1.0)


# ---------------------------------------------------------------------------
# Coherent energetic quantity


def test_coherent_energetic_zero_for_diagonal_evolution():
    h = qubit_hamiltonian(1.0)
    assert coherent_energetic(thermal_qubit(0.2), thermal_qubit(0.7), h) == pytest.approx(
        0.0, abs=1e-14
    )


def test_coherent_energetic_positive_when_coherence_appears():
    h = qubit_hamiltonian(1.0)
    before = thermal_qubit(0.4)
    after = DensityMatrix(np.array([[0.7, 0.2], [0.2, 0.3]], dtype=complex))
    assert coherent_energetic(before, after, h) > 0.0


def test_heat_splits_into_coherent_parts():
    # Q = C1 + sum_k E_k dp_a |c_before|^2 is an algebraic identity; the
    # direct evaluation of the second term must match Q - C1 exactly.
    h = qubit_hamiltonian(1.0)
    config = HbacConfig(eps1_0=0.3, target_coherence=0.5j, eps2=0.5, eps3=0.5, xi=0.7, alpha_prime=0.8, cycles=6)
    states = hbac_iterate(config)
    for before, after in zip(states, states[1:]):
        q = float(np.trace(h @ (after.data - before.data)).real)
        c1 = coherent_energetic(before, after, h)
        direct = coherent_heat_direct(before, after, h)
        assert q - c1 == pytest.approx(direct, abs=1e-12)


# ---------------------------------------------------------------------------
# The per-cycle series


def test_series_heat_closed_form():
    config = HbacConfig(eps1_0=0.0, eps2=0.5, eps3=0.5, xi=0.4, cycles=8)
    records = thermo_series(config)
    assert len(records) == 8
    for r in records:
        closed = -0.5 * 0.8 * LAM**r.cycle * (1.0 - LAM)
        assert r.Q == pytest.approx(closed, abs=1e-12)
        assert r.W == pytest.approx(-r.Q, abs=1e-14)


def test_series_heat_is_independent_of_pair_coherence():
    base = [r.Q for r in thermo_series(HbacConfig(eps1_0=0.0, eps2=0.5, eps3=0.5, xi=0.0, cycles=6))]
    coh = [r.Q for r in thermo_series(HbacConfig(eps1_0=0.0, eps2=0.5, eps3=0.5, xi=0.9, cycles=6))]
    assert np.allclose(base, coh, atol=1e-12)


def test_series_incoherent_run_has_no_coherent_part():
    config = HbacConfig(eps1_0=0.0, eps2=0.5, eps3=0.5, xi=0.0, cycles=10)
    for r in thermo_series(config):
        assert r.C1 == pytest.approx(0.0, abs=1e-15)
        assert r.Q_coh == pytest.approx(r.Q, abs=1e-15)


def test_series_straight_ray_efficiency_is_unity():
    # From a maximally mixed start the target Bloch vector moves along a
    # fixed ray, so from cycle 1 on the eigenbasis is constant: C1 = 0 and
    # zeta_coh = 1 no matter how coherent the pair is.
    for xi in (0.0, 0.2, 0.4):
        records = thermo_series(HbacConfig(eps1_0=0.0, eps2=0.5, eps3=0.5, xi=xi, cycles=12))
        for r in records[1:]:
            assert r.zeta_coh == pytest.approx(1.0, abs=1e-10)


def test_series_power_definition():
    config = HbacConfig(eps1_0=0.1, target_coherence=0.3, eps2=0.5, eps3=0.6, xi=0.5, cycles=7)
    records = thermo_series(config)
    longer = thermo_series(
        HbacConfig(eps1_0=0.1, target_coherence=0.3, eps2=0.5, eps3=0.6, xi=0.5, cycles=8)
    )
    for r, r_next in zip(records, longer[1:]):
        assert r.J_coh == pytest.approx(abs(r_next.Q_coh - r.Q_coh), abs=1e-13)


def test_series_carnot_reference():
    # eps1 climbs toward 0.8; once it passes the bath's 0.5 the cold
    # temperature is finite and below T_h, and zeta_carnot -> 1 exactly
    # because beta(0.8) = 2 beta(0.5).
    config = HbacConfig(eps1_0=0.0, eps2=0.5, eps3=0.5, xi=0.0, cycles=14)
    records = thermo_series(config)
    assert math.isnan(records[0].zeta_carnot)  # infinite-temperature target
    assert math.isnan(records[1].zeta_carnot)  # T_c == T_h after one cycle
    t_hot = 1.0 / inverse_temperature(0.5)
    for r in records[2:]:
        assert r.zeta_carnot > 0.0
    assert records[-1].zeta_carnot == pytest.approx(1.0, abs=1e-2)
    # spot-check one record against first principles
    eps1_2 = 0.8 * (1.0 - LAM**2)
    t_cold = 1.0 / inverse_temperature(eps1_2)
    assert records[2].zeta_carnot == pytest.approx(t_cold / (t_hot - t_cold), abs=1e-12)


def test_series_verbatim_cold_temperature_convention():
    # The printed form reads the log-ratio itself as the temperature; at
    # these parameters that always exceeds T_h, so no record gets a finite
    # Carnot reference.
    config = HbacConfig(eps1_0=0.0, eps2=0.5, eps3=0.5, xi=0.0, cycles=10)
    records = thermo_series(config, tc_verbatim=True)
    assert all(math.isnan(r.zeta_carnot) for r in records)
    default = thermo_series(config)
    assert any(not math.isnan(r.zeta_carnot) for r in default)


def test_series_efficiency_nan_when_no_work():
    # Starting at the stationary polarization with an incoherent pair, the
    # compression exchanges nothing: zeta_coh must be nan, not infinite.
    config = HbacConfig(eps1_0=0.8, eps2=0.5, eps3=0.5, xi=0.0, cycles=3)
    records = thermo_series(config)
    assert all(math.isnan(r.zeta_coh) for r in records)
    assert all(abs(r.W) < 1e-14 for r in records)


def test_series_chains_the_hbac_trajectory():
    # The records' heat must match the marginal trajectory of the plain run.
    config = HbacConfig(eps1_0=0.25, target_coherence=0.4j, eps2=0.3, eps3=0.6, xi=0.8, alpha_prime=1.9, cycles=6)
    states = hbac_iterate(config)
    h = qubit_hamiltonian(1.0)
    records = thermo_series(config)
    for r, before, after in zip(records, states, states[1:]):
        q_direct = float(np.trace(h @ (after.data - before.data)).real)
        assert r.Q == pytest.approx(q_direct, abs=1e-12)


def test_series_omega_scales_energies():
    config = HbacConfig(eps1_0=0.0, eps2=0.5, eps3=0.5, xi=0.3, cycles=4)
    base = thermo_series(config, 1.0)
    doubled = thermo_series(config, 2.0)
    for a, b in zip(base, doubled):
        assert b.Q == pytest.approx(2.0 * a.Q, abs=1e-13)
        assert b.W == pytest.approx(2.0 * a.W, abs=1e-13)
        # efficiency is scale-free
        if not math.isnan(a.zeta_coh):
            assert b.zeta_coh == pytest.approx(a.zeta_coh, abs=1e-11)


def test_series_requires_two_cycles():
    with pytest.raises(InvalidParameter):
        thermo_series(HbacConfig(eps2=0.5, eps3=0.5, cycles=1))


def test_refresh_never_touches_target_marginal():
    # Thermo bookkeeping attributes all target heat to the compression;
    # that is only honest if the refresh really leaves the target alone.
    config = HbacConfig(eps1_0=0.37, target_coherence=0.2 + 0.1j, eps2=0.5, eps3=0.7, xi=0.6, cycles=0)
    target = initial_target_state(config)
    reset = coherent_reset_state(0.5, 0.7, 0.6, 0.0)
    refreshed = tensor(target, reset)
    marginal = partial_trace(refreshed, (0,))
    assert np.max(np.abs(marginal.data - target.data)) < 1e-14
