"""Three-qubit heat-bath algorithmic cooling with a coherent reset pair.

One cycle refreshes qubits 2 and 3 with a bath-prepared two-qubit state
(possibly carrying a |00><11| coherence), applies the compression unitary
that exchanges |011> and |100>, and discards the reset pair. The module
provides the brute-force channel construction, its exact closed-form
n-cycle propagator, a verbatim (and partly defective) printed variant
of that propagator behind a ``verbatim`` switch, stationary-state
extraction, noisy final rotations, and the confidence-band sweep used for
uncertainty analysis.

Basis ordering is |q1 q2 q3> with the target first (index q1*4+q2*2+q3).

Closed-form ingredients, with lam = (1 - eps2*eps3)/2:

* populations relax as p00(n) = lam^n * (eps1 - eps_v)/2 + (1 + eps_v)/2
  where eps_v = (eps2 + eps3)/(1 + eps2*eps3);
* the target coherence obeys b(n+1) = lam*b(n) + c with
  c = <00|rho_23|11>, so b(n) = lam^n b(0) + c (1-lam^n)/(1-lam);
* the stationary coherence is c/(1-lam) = (xi/2) e^{-i alpha'}
  sqrt(1-eps_v^2): the stationary state's coherence measure equals xi
  itself. The printed n-cycle matrix instead carries an extra eps_v
  factor and a spurious linear-in-n term; it is reproduced verbatim
  behind the ``verbatim`` flag and compared, never trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .bounds import RotationSpec, VirtualQubitSpec, rotation_unitary, thermal_qubit
from .errors import InvalidParameter, InvalidPolarization
from .qcore import (
    ChannelRep,
    DensityMatrix,
    ID2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    apply_channel,
    channel_from_environment,
    fixed_point,
    hermitize,
    tensor,
    trace_distance,
)


@dataclass(frozen=True)
class HbacConfig:
    """Full protocol parameter record for a cooling run."""

    eps1_0: float = 0.0
    target_coherence: complex = 0.0 + 0.0j
    eps2: float = 0.5
    eps3: float = 0.5
    xi: float = 0.0
    alpha_prime: float = 0.0
    cycles: int = 0

    def __post_init__(self):
        for name in ("eps1_0", "eps2", "eps3"):
            val = getattr(self, name)
            if not -1.0 <= val <= 1.0:
                raise InvalidPolarization(f"{name}={val} outside [-1, 1]")
        if not 0.0 <= self.xi <= 1.0:
            raise InvalidParameter(f"xi={self.xi} outside [0, 1]")
        if self.cycles < 0 or int(self.cycles) != self.cycles:
            raise InvalidParameter(f"cycles={self.cycles} must be a nonnegative integer")
        cap = math.sqrt(max(0.0, 1.0 - self.eps1_0**2))
        if abs(self.target_coherence) > cap * (1.0 + 1e-12):
            raise InvalidParameter(
                f"|target_coherence|={abs(self.target_coherence)} exceeds sqrt(1-eps1^2)={cap}"
            )


@dataclass(frozen=True)
class GateNoise:
    """Average gate fidelity of the single final rotation."""

    fidelity: float = 1.0

    def __post_init__(self):
        if not 0.5 < self.fidelity <= 1.0:
            raise InvalidParameter(f"fidelity={self.fidelity} outside (0.5, 1]")


def _lam(eps2: float, eps3: float) -> float:
    return (1.0 - eps2 * eps3) / 2.0


def virtual_polarization(eps2: float, eps3: float) -> float:
    """(eps2 + eps3) / (1 + eps2*eps3)."""
    return (eps2 + eps3) / (1.0 + eps2 * eps3)


def reset_coherence_element(eps2: float, eps3: float, xi: float, alpha_prime: float) -> complex:
    """<00|rho_23|11> of the refreshed pair."""
    return (
        0.25
        * xi
        * np.exp(-1j * alpha_prime)
        * math.sqrt(max(0.0, 1.0 - eps2**2))
        * math.sqrt(max(0.0, 1.0 - eps3**2))
    )


def compression_unitary() -> np.ndarray:
    """Involutive 8x8 permutation exchanging |011> and |100>."""
    u = np.eye(8, dtype=complex)
    u[3, 3] = u[4, 4] = 0.0
    u[3, 4] = u[4, 3] = 1.0
    return u


def coherent_reset_state(eps2: float, eps3: float, xi: float, alpha_prime: float) -> DensityMatrix:
    """Bath-prepared reset pair: thermal populations plus a |00><11| element."""
    for name, val in (("eps2", eps2), ("eps3", eps3)):
        if not -1.0 <= val <= 1.0:
            raise InvalidPolarization(f"{name}={val} outside [-1, 1]")
    if not 0.0 <= xi <= 1.0:
        raise InvalidParameter(f"xi={xi} outside [0, 1]")
    base = tensor(thermal_qubit(eps2), thermal_qubit(eps3)).data.copy()
    c = reset_coherence_element(eps2, eps3, xi, alpha_prime)
    base[0, 3] = c
    base[3, 0] = np.conj(c)
    return DensityMatrix(base, subsystem_dims=(2, 2))


def cooling_cycle_channel(reset_pair: DensityMatrix) -> ChannelRep:
    """Single-cycle target-qubit channel for an arbitrary refreshed pair.

    Built by brute force: tensor, conjugate by the compression unitary,
    trace out the pair. This is the oracle every closed form is tested
    against.
    """
    return channel_from_environment(compression_unitary(), reset_pair, system_dim=2)


def hbac_channel(config: HbacConfig) -> ChannelRep:
    return cooling_cycle_channel(
        coherent_reset_state(config.eps2, config.eps3, config.xi, config.alpha_prime)
    )


def initial_target_state(config: HbacConfig) -> DensityMatrix:
    """Target qubit at cycle zero: polarization eps1_0, coherence chi.

    <1|rho|0> = (chi/2) sqrt(1 - eps1_0^2).
    """
    lower = 0.5 * config.target_coherence * math.sqrt(max(0.0, 1.0 - config.eps1_0**2))
    mat = np.array(
        [
            [(1.0 + config.eps1_0) / 2.0, np.conj(lower)],
            [lower, (1.0 - config.eps1_0) / 2.0],
        ],
        dtype=complex,
    )
    return DensityMatrix(mat)


def hbac_iterate(config: HbacConfig):
    """States rho_1(0) ... rho_1(cycles) under repeated cooling cycles."""
    chan = hbac_channel(config)
    states = [initial_target_state(config)]
    for _ in range(config.cycles):
        states.append(apply_channel(chan, states[-1]))
    return states


def analytic_phi_n(n: int, eps2: float, eps3: float, xi: float, alpha_prime: float, *, verbatim: bool = False) -> np.ndarray:
    """Closed-form n-cycle propagator on column-stacked qubit states.

    The default is the corrected form that matches the brute-force
    channel power exactly. ``verbatim=True`` instead reproduces the
    printed matrix, which fails to be the identity at n=0 and
    mislabels the population column structure; use it only to measure
    that deviation.
    """
    if n < 0:
        raise InvalidParameter(f"n={n} must be nonnegative")
    lam = _lam(eps2, eps3)
    lam_n = lam**n
    if verbatim:
        denom = 2.0 * (1.0 + eps2 * eps3)
        phi11 = ((1.0 - eps2) * (1.0 - eps3) / denom) * lam_n + (1.0 + eps2) * (1.0 + eps3) / denom
        pref = (
            np.exp(1j * alpha_prime)
            * xi
            * math.sqrt(max(0.0, 1.0 - eps2**2))
            * math.sqrt(max(0.0, 1.0 - eps3**2))
            / (2.0 * (eps2 * eps3 - 1.0) * (1.0 + eps2 * eps3) ** 2)
        )
        phi21 = (
            (eps2 + eps3) * (eps2 * eps3 - 1.0)
            - (
                (eps2 + eps3) * (1.0 - eps2 * eps3)
                - n * (1.0 - eps2) * (1.0 - eps3) * (1.0 + eps2 * eps3)
            )
            * lam_n
        ) * pref
        return np.array(
            [
                [phi11, 0.0, 0.0, phi11],
                [phi21, lam_n, 0.0, phi21],
                [np.conj(phi21), 0.0, lam_n, np.conj(phi21)],
                [1.0 - phi11, 0.0, 0.0, 1.0 - phi11],
            ],
            dtype=complex,
        )
    eps_v = virtual_polarization(eps2, eps3)
    ground = (1.0 + eps_v) / 2.0
    excited = 1.0 - ground
    geom = (1.0 - lam_n) / (1.0 - lam)
    g = reset_coherence_element(eps2, eps3, xi, alpha_prime) * geom
    return np.array(
        [
            [excited * lam_n + ground, 0.0, 0.0, ground * (1.0 - lam_n)],
            [np.conj(g), lam_n, 0.0, np.conj(g)],
            [g, 0.0, lam_n, g],
            [excited * (1.0 - lam_n), 0.0, 0.0, ground * lam_n + excited],
        ],
        dtype=complex,
    )


def analytic_rho1_n(n: int, config: HbacConfig, *, verbatim: bool = False) -> DensityMatrix:
    """Closed-form target state after n cycles.

    Default: exact solution of the cycle recursion (matches brute-force
    iteration). ``verbatim=True`` evaluates the printed
    expression for the coherence, which carries an extra eps_v factor and
    a spurious n-linear term; populations are printed correctly.
    """
    if n < 0:
        raise InvalidParameter(f"n={n} must be nonnegative")
    eps1, chi = config.eps1_0, config.target_coherence
    eps2, eps3 = config.eps2, config.eps3
    lam = _lam(eps2, eps3)
    lam_n = lam**n
    eps_v = virtual_polarization(eps2, eps3)
    p00 = lam_n * (eps1 - eps_v) / 2.0 + (1.0 + eps_v) / 2.0
    init_lower = 0.5 * chi * math.sqrt(max(0.0, 1.0 - eps1**2))
    if verbatim:
        coupling = eps1 * eps2 * eps3 + eps1 - eps2 - eps3
        bracket = eps_v - (eps_v - n * coupling / (1.0 - eps2 * eps3)) * lam_n
        lower = (
            bracket
            * np.exp(1j * config.alpha_prime)
            * config.xi
            * math.sqrt(max(0.0, 1.0 - eps2**2))
            * math.sqrt(max(0.0, 1.0 - eps3**2))
            / (2.0 * (1.0 + eps2 * eps3))
            + init_lower * lam_n
        )
    else:
        c = reset_coherence_element(eps2, eps3, config.xi, config.alpha_prime)
        lower = lam_n * init_lower + np.conj(c) * (1.0 - lam_n) / (1.0 - lam)
    mat = np.array(
        [[p00, np.conj(lower)], [lower, 1.0 - p00]],
        dtype=complex,
    )
    # The printed transient coherence is not guaranteed to stay inside the
    # positivity budget, so verbatim output skips state validation.
    return DensityMatrix(mat, validate=not verbatim)


def extract_virtual_qubit(config: HbacConfig) -> VirtualQubitSpec:
    """Stationary-state parameters of the cooling channel.

    Polarization (eps2+eps3)/(1+eps2*eps3); coherence measure xi with
    phase alpha_prime — the values the channel's fixed point actually
    carries.
    """
    return VirtualQubitSpec(
        pol_v=virtual_polarization(config.eps2, config.eps3),
        gamma=config.xi,
        alpha=config.alpha_prime,
    )


def hbac_epsilon_star(pol_v: float) -> float:
    """Cooling bound at maximal reset coherence: pol_v sqrt(2 - pol_v^2)."""
    if not 0.0 <= pol_v <= 1.0:
        raise InvalidPolarization(f"pol_v={pol_v} outside [0, 1]")
    return pol_v * math.sqrt(2.0 - pol_v**2)


def apply_noisy_rotation(rho: DensityMatrix, rotation: RotationSpec, noise: GateNoise) -> DensityMatrix:
    """Ideal rotation followed by depolarizing noise matched to the fidelity.

    Depolarizing probability p = 2 (1 - fidelity) makes the average gate
    fidelity of the composite equal the configured value; fidelity 1 is
    the bare rotation.
    """
    if rho.dim != 2:
        raise InvalidParameter("noisy rotation acts on a single qubit")
    v = (
        math.cos(rotation.chi / 2.0) * ID2
        + 1j
        * math.sin(rotation.chi / 2.0)
        * (-math.sin(rotation.alpha_rot) * SIGMA_X + math.cos(rotation.alpha_rot) * SIGMA_Y)
    )
    out = v @ rho.data @ v.conj().T
    p = 2.0 * (1.0 - noise.fidelity)
    if p > 0.0:
        out = (1.0 - p) * out + p * 0.5 * np.trace(out) * ID2
    return DensityMatrix(hermitize(out))


def confidence_band_sweep(pol_v: float, gamma_min: float, gamma_max: float, gamma_rot_grid):
    """Rotation outcomes when the true coherence is only banded.

    For each gamma_rot in the grid, evaluates the reached polarization
    and the residual off-diagonal magnitude at gamma in {gamma_min,
    midpoint, gamma_max}. Returns rows
    (gamma_rot, eps_min, eps_mid, eps_max, coh_min, coh_mid, coh_max).
    """
    if not 0.0 <= gamma_min <= gamma_max <= 1.0:
        raise InvalidParameter(f"need 0 <= gamma_min <= gamma_max <= 1, got [{gamma_min}, {gamma_max}]")
    gammas = (gamma_min, 0.5 * (gamma_min + gamma_max), gamma_max)
    rows = []
    for gr in gamma_rot_grid:
        gr = float(gr)
        eps_cols = []
        coh_cols = []
        for g in gammas:
            state = bounds.coherent_virtual_state(VirtualQubitSpec(pol_v, g, 0.0))
            v = rotation_unitary(pol_v, gr, 0.0)
            out = v @ state.data @ v.conj().T
            eps_cols.append(float(np.trace(out @ SIGMA_Z).real))
            coh_cols.append(float(abs(out[0, 1])))
        rows.append((gr, *eps_cols, *coh_cols))
    return rows


def trajectory_rows(config: HbacConfig):
    """(cycle, eps_z, coh_re, coh_im, trace_dist_to_fixed_point) per cycle."""
    states = hbac_iterate(config)
    fp = fixed_point(hbac_channel(config))
    rows = []
    for n, state in enumerate(states):
        rows.append(
            (
                n,
                float((state.data[0, 0] - state.data[1, 1]).real),
                float(state.data[0, 1].real),
                float(state.data[0, 1].imag),
                trace_distance(state, fp),
            )
        )
    return rows
