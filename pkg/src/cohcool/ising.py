"""Physical preparation of a coherent reset pair from an Ising thermal state.

The two reset qubits are taken as a transverse-field Ising pair whose
thermal state carries a |00><11| coherence; feeding that state into the
cooling cycle yields a stationary target with both polarization and
coherence. The coherence magnitude follows g * tanh(beta * sqrt(g^2 +
omega^2)) up to a proportionality constant, which scaling_check fits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import InvalidParameter
from .hbac import cooling_cycle_channel
from .qcore import (
    DensityMatrix,
    ID2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    apply_channel,
    bloch_vector,
    eigh_descending,
    fixed_point,
    hermitize,
)


@dataclass(frozen=True)
class IsingConfig:
    omega: float
    g: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.omega) and math.isfinite(self.g) and math.isfinite(self.beta)):
            raise InvalidParameter("Ising parameters must be finite")
        if self.omega <= 0.0:
            raise InvalidParameter(f"omega={self.omega} must be positive")
        if self.g < 0.0:
            raise InvalidParameter(f"g={self.g} must be nonnegative")
        if self.beta < 0.0:
            raise InvalidParameter(f"beta={self.beta} must be nonnegative")


def ising_hamiltonian(config: IsingConfig) -> np.ndarray:
    """-(omega/4)(sz x I + I x sz) + g (sx x sx - sy x sy).

    The coupling term only connects |00> and |11>, with matrix element 2g.
    """
    h = -(config.omega / 4.0) * (np.kron(SIGMA_Z, ID2) + np.kron(ID2, SIGMA_Z))
    h = h + config.g * (np.kron(SIGMA_X, SIGMA_X) - np.kron(SIGMA_Y, SIGMA_Y))
    return h


def gibbs_state(hamiltonian: np.ndarray, beta: float) -> DensityMatrix:
    """exp(-beta H)/Z by spectral decomposition, overflow-safe."""
    if beta < 0.0:
        raise InvalidParameter(f"beta={beta} must be nonnegative")
    vals, vecs = eigh_descending(hermitize(np.asarray(hamiltonian, dtype=complex)))
    weights = np.exp(-beta * (vals - vals.min()))
    weights = weights / weights.sum()
    rho = (vecs * weights) @ vecs.conj().T
    return DensityMatrix(hermitize(rho), subsystem_dims=(2, 2))


def ising_virtual_coherence(config: IsingConfig):
    """(gamma, pol_v) of the cooling fixed point fed by the Ising pair."""
    rho23 = gibbs_state(ising_hamiltonian(config), config.beta)
    fp = fixed_point(cooling_cycle_channel(rho23))
    pol_v = float((fp.data[0, 0] - fp.data[1, 1]).real)
    plane = 1.0 - pol_v**2
    gamma = 0.0 if plane <= 0.0 else 2.0 * abs(fp.data[0, 1]) / math.sqrt(plane)
    return gamma, pol_v


def target_trajectory(config: IsingConfig, cycles: int):
    """Bloch coordinates of the target over repeated cycles, from I/2."""
    if cycles < 0:
        raise InvalidParameter(f"cycles={cycles} must be nonnegative")
    rho23 = gibbs_state(ising_hamiltonian(config), config.beta)
    chan = cooling_cycle_channel(rho23)
    state = DensityMatrix(0.5 * ID2)
    rows = [(0, *bloch_vector(state))]
    for n in range(1, cycles + 1):
        state = apply_channel(chan, state)
        rows.append((n, *bloch_vector(state)))
    return rows


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares comparison of gamma against g*tanh(beta*sqrt(g^2+omega^2))."""

    constant: float
    residuals: tuple
    spearman: float


def scaling_model(config: IsingConfig) -> float:
    return config.g * math.tanh(config.beta * math.sqrt(config.g**2 + config.omega**2))


def scaling_check(configs) -> ScalingFit:
    """Fit numerical coherences to the model through the origin.

    Monotone agreement (Spearman correlation) is the meaningful figure;
    the proportionality constant and residuals quantify the fit.
    """
    configs = list(configs)
    if len(configs) < 3:
        raise InvalidParameter("need at least 3 grid points for a scaling fit")
    gammas = np.array([ising_virtual_coherence(c)[0] for c in configs])
    model = np.array([scaling_model(c) for c in configs])
    denom = float(model @ model)
    constant = float(model @ gammas) / denom if denom > 0.0 else 0.0
    residuals = tuple(float(r) for r in gammas - constant * model)
    rho, _ = stats.spearmanr(model, gammas)
    return ScalingFit(constant=constant, residuals=residuals, spearman=float(rho))
