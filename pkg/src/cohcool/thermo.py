"""Coherence-aware thermodynamic bookkeeping per cooling cycle.

Snapshots are taken around the compression unitary only: "before" is the
state right after the reset pair is refreshed, "after" is right after the
compression. The refresh never touches the target marginal, so all target
heat is attributed to the compression.

Per cycle n the records hold the bare heat Q into the target, the work W
(total energy change of the three qubits), the coherent-energetic
quantity C1 of the target, the coherent heat Q_coh = Q - C1, the
coefficient of performance zeta_coh = -Q_coh / W, the cooling power
J_coh = |Q_coh(n+1) - Q_coh(n)|, and a Carnot reference built from the
target and bath temperatures.

Each qubit's Hamiltonian is diag(0, omega): ground state |0>, gap omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .bounds import inverse_temperature
from .errors import InvalidParameter
from .hbac import HbacConfig, coherent_reset_state, compression_unitary, initial_target_state
from .qcore import DensityMatrix, eigh_descending, hermitize, partial_trace, tensor


def qubit_hamiltonian(omega: float) -> np.ndarray:
    return np.diag([0.0, omega]).astype(complex)


def spectral_amplitudes(rho, hamiltonian):
    """Populations and squared transition amplitudes |<k|a>|^2.

    ``k`` runs over Hamiltonian eigenvectors and ``a`` over state
    eigenvectors, both ordered by descending eigenvalue. A degenerate
    state (eigenvalue gap below the package tolerance) has no preferred
    eigenbasis; the tie-break uses the Hamiltonian eigenbasis in
    ascending-energy order, which is the continuous limit of the
    descending-population order for a cooling target.
    """
    rho_mat = rho.data if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    h = np.asarray(hamiltonian, dtype=complex)
    if rho_mat.shape != (2, 2) or h.shape != (2, 2):
        raise InvalidParameter("spectral amplitudes are defined for single qubits here")
    h_vals, h_vecs = eigh_descending(h)
    p, basis = eigh_descending(rho_mat)
    if abs(p[0] - p[1]) < tol.EIGENVALUE_DEGENERACY_GAP:
        basis = h_vecs[:, ::-1]  # ascending energy: |0> first
        p = np.array([float((basis[:, a].conj() @ rho_mat @ basis[:, a]).real) for a in range(2)])
    c2 = np.abs(h_vecs.conj().T @ basis) ** 2
    return p, c2


def cycle_energetics(rho_before: DensityMatrix, rho_after: DensityMatrix, omega: float):
    """(Q, W) for one compression step.

    Q is the energy change of the target marginal; W is the summed energy
    change of all three qubit marginals.
    """
    if rho_before.dim != 8 or rho_after.dim != 8:
        raise InvalidParameter("cycle energetics expects the full three-qubit states")
    h1 = qubit_hamiltonian(omega)
    q = w = 0.0
    for i in range(3):
        before = partial_trace(rho_before, (i,)).data
        after = partial_trace(rho_after, (i,)).data
        change = float(np.trace(h1 @ (after - before)).real)
        w += change
        if i == 0:
            q = change
    return q, w


def coherent_energetic(rho1_before, rho1_after, hamiltonian) -> float:
    """C1 = sum_ka E_k p_a(after) (|<k|a>|^2_after - |<k|a>|^2_before).

    Positive when the target acquires coherence over the cycle; zero when
    both eigenbases coincide with the energy basis.
    """
    h_vals, _ = eigh_descending(np.asarray(hamiltonian, dtype=complex))
    _, c2_before = spectral_amplitudes(rho1_before, hamiltonian)
    p_after, c2_after = spectral_amplitudes(rho1_after, hamiltonian)
    return float(np.sum(h_vals[:, None] * p_after[None, :] * (c2_after - c2_before)))


def coherent_heat_direct(rho1_before, rho1_after, hamiltonian) -> float:
    """Q_coh evaluated from its own decomposition: sum E_k (dp_a) |c|^2_before."""
    h_vals, _ = eigh_descending(np.asarray(hamiltonian, dtype=complex))
    p_before, c2_before = spectral_amplitudes(rho1_before, hamiltonian)
    p_after, _ = spectral_amplitudes(rho1_after, hamiltonian)
    return float(np.sum(h_vals[:, None] * (p_after - p_before)[None, :] * c2_before))


@dataclass(frozen=True)
class ThermoRecord:
    cycle: int
    Q: float
    W: float
    C1: float
    Q_coh: float
    zeta_coh: float
    J_coh: float
    zeta_carnot: float


def _cold_temperature(eps1: float, omega: float, verbatim: bool) -> float:
    """Target temperature from its polarization.

    The printed convention reads T_c = ln[(1+eps)/(1-eps)], dimensionally
    an inverse temperature; ``verbatim`` evaluates it as printed, the
    default takes the reciprocal convention T_c = omega / ln[...].
    """
    if eps1 <= 0.0:
        return math.inf
    log_ratio = math.log((1.0 + eps1) / (1.0 - eps1)) if eps1 < 1.0 else math.inf
    if verbatim:
        return log_ratio
    return omega / log_ratio if log_ratio > 0.0 else math.inf


def thermo_series(config: HbacConfig, omega: float = 1.0, *, tc_verbatim: bool = False):
    """Per-cycle thermodynamic records for a cooling run.

    ``config.cycles`` records are produced (cycle indices 0 ..
    cycles-1); one extra compression is simulated internally so the
    power J_coh is defined on every record. Cycles with no work exchange
    get zeta_coh = nan rather than an infinity.
    """
    if config.cycles < 2:
        raise InvalidParameter("thermo series needs at least 2 cycles")
    h1 = qubit_hamiltonian(omega)
    u = compression_unitary()
    reset = coherent_reset_state(config.eps2, config.eps3, config.xi, config.alpha_prime)
    beta_h = 0.5 * (inverse_temperature(config.eps2, omega) + inverse_temperature(config.eps3, omega))
    t_hot = math.inf if beta_h == 0.0 else 1.0 / beta_h

    target = initial_target_state(config)
    raw = []
    for n in range(config.cycles + 1):
        before = tensor(target, reset)
        after_mat = hermitize(u @ before.data @ u.conj().T)
        after = DensityMatrix(after_mat, subsystem_dims=(2, 2, 2))
        q, w = cycle_energetics(before, after, omega)
        next_target = partial_trace(after, (0,))
        c1 = coherent_energetic(target, next_target, h1)
        eps1 = float((target.data[0, 0] - target.data[1, 1]).real)
        raw.append((n, q, w, c1, q - c1, eps1))
        target = next_target

    records = []
    for n, q, w, c1, q_coh, eps1 in raw[: config.cycles]:
        zeta = -q_coh / w if abs(w) > tol.WORK_DUST_ATOL * omega else math.nan
        j = abs(raw[n + 1][4] - q_coh)
        t_cold = _cold_temperature(eps1, omega, tc_verbatim)
        if math.isinf(t_cold) or math.isinf(t_hot) or t_hot <= t_cold:
            zeta_carnot = math.nan
        else:
            zeta_carnot = t_cold / (t_hot - t_cold)
        records.append(
            ThermoRecord(
                cycle=n, Q=q, W=w, C1=c1, Q_coh=q_coh, zeta_coh=zeta, J_coh=j, zeta_carnot=zeta_carnot
            )
        )
    return records
