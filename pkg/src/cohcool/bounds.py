"""Single-qubit geometry of coherence-assisted cooling.

A virtual qubit is a two-level system with polarization ``pol_v`` along z
and an in-plane coherence of magnitude ``gamma`` at phase ``alpha``. A
final unitary rotation can convert that coherence into extra polarization;
this module holds the exact bound, the rotation itself, the polarization
reached by a mismatched rotation, and the classification of which
rotations cool at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DivisionDomain, InvalidParameter, InvalidPolarization
from .qcore import ID2, SIGMA_X, SIGMA_Y, DensityMatrix


@dataclass(frozen=True)
class VirtualQubitSpec:
    """Polarization, coherence magnitude, and coherence phase of a qubit."""

    pol_v: float
    gamma: float
    alpha: float = 0.0

    def __post_init__(self):
        if not -1.0 <= self.pol_v <= 1.0:
            raise InvalidPolarization(f"pol_v={self.pol_v} outside [-1, 1]")
        if not 0.0 <= self.gamma <= 1.0:
            raise InvalidParameter(f"gamma={self.gamma} outside [0, 1]")
        object.__setattr__(self, "alpha", float(self.alpha) % (2.0 * math.pi))


@dataclass(frozen=True)
class RotationSpec:
    """A polarization-enhancing rotation, stored with its derived angle."""

    gamma_rot: float
    alpha_rot: float
    chi: float


class CoolingRegionKind(Enum):
    ALWAYS_COOLS = "always-cools"
    COOLS_FOR_ALL_ROTATIONS = "cools-for-all-rotations"
    COOLS_IF_ROTATION_BOUNDED = "cools-if-rotation-bounded"
    HEATS = "heats"


@dataclass(frozen=True)
class CoolingRegion:
    kind: CoolingRegionKind
    gamma_rot_max: float | None = None


def _check_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InvalidParameter(f"{name}={value} outside [0, 1]")
    return value


def inverse_temperature(epsilon: float, omega: float = 1.0) -> float:
    """beta(eps) = ln[(1+eps)/(1-eps)] / omega; +inf at eps=1, -inf at eps=-1."""
    if not -1.0 <= epsilon <= 1.0:
        raise InvalidPolarization(f"epsilon={epsilon} outside [-1, 1]")
    if epsilon == 1.0:
        return math.inf
    if epsilon == -1.0:
        return -math.inf
    return math.log((1.0 + epsilon) / (1.0 - epsilon)) / omega


def thermal_qubit(epsilon: float) -> DensityMatrix:
    """diag((1+eps)/2, (1-eps)/2); eps=+1 is the ground state."""
    if not -1.0 <= epsilon <= 1.0:
        raise InvalidPolarization(f"epsilon={epsilon} outside [-1, 1]")
    return DensityMatrix(np.diag([(1.0 + epsilon) / 2.0, (1.0 - epsilon) / 2.0]).astype(complex))


def coherent_virtual_state(spec: VirtualQubitSpec) -> DensityMatrix:
    """Materialize the parametrized qubit state.

    Diagonal (1 +- pol_v)/2; off-diagonal <0|rho|1> =
    (gamma/2) e^{-i alpha} sqrt(1 - pol_v^2).
    """
    off = 0.5 * spec.gamma * math.sqrt(max(0.0, 1.0 - spec.pol_v**2)) * np.exp(-1j * spec.alpha)
    mat = np.array(
        [
            [(1.0 + spec.pol_v) / 2.0, off],
            [np.conj(off), (1.0 - spec.pol_v) / 2.0],
        ],
        dtype=complex,
    )
    return DensityMatrix(mat)


def epsilon_star(pol_v: float, gamma: float) -> float:
    """Best polarization reachable by rotating away coherence gamma.

    sqrt(pol_v^2 + (1 - pol_v^2) gamma^2): the eigenvalue gap of the
    coherent state. Reduces to |pol_v| at gamma=0 and to 1 at gamma=1.
    """
    if not -1.0 <= pol_v <= 1.0:
        raise InvalidPolarization(f"pol_v={pol_v} outside [-1, 1]")
    gamma = _check_unit_interval("gamma", gamma)
    return math.sqrt(pol_v**2 + (1.0 - pol_v**2) * gamma**2)


def rotation_angle(pol_v: float, gamma_rot: float) -> float:
    """chi = arccos(pol_v / epsilon_star(pol_v, gamma_rot)).

    The degenerate case pol_v = gamma_rot = 0 has no preferred direction;
    the continuous limit is no rotation, so chi = 0.
    """
    pol_v = _check_unit_interval("pol_v", pol_v)
    gamma_rot = _check_unit_interval("gamma_rot", gamma_rot)
    star = epsilon_star(pol_v, gamma_rot)
    if star == 0.0:
        return 0.0
    return math.acos(min(1.0, pol_v / star))


def make_rotation_spec(pol_v: float, gamma_rot: float, alpha_rot: float) -> RotationSpec:
    return RotationSpec(gamma_rot=float(gamma_rot), alpha_rot=float(alpha_rot), chi=rotation_angle(pol_v, gamma_rot))


def rotation_unitary(pol_v: float, gamma_rot: float, alpha_rot: float) -> np.ndarray:
    """The polarization-enhancing unitary V = exp(i chi sigma_perp / 2).

    sigma_perp(alpha_rot) = -sin(alpha_rot) sigma_x + cos(alpha_rot) sigma_y.
    With alpha_rot equal to the state's coherence phase and gamma_rot equal
    to its coherence magnitude, V rho V^dag is diagonal with the full
    epsilon_star polarization. sigma_perp squares to the identity, so the
    exponential has the closed form cos(chi/2) I + i sin(chi/2) sigma_perp.
    """
    chi = rotation_angle(pol_v, gamma_rot)
    sigma_perp = -math.sin(alpha_rot) * SIGMA_X + math.cos(alpha_rot) * SIGMA_Y
    return math.cos(chi / 2.0) * ID2 + 1j * math.sin(chi / 2.0) * sigma_perp


def epsilon_after_rotation(pol_v: float, gamma: float, gamma_rot: float) -> float:
    """Polarization after rotating a (pol_v, gamma) state as if it had gamma_rot.

    [pol_v^2 + gamma gamma_rot (1 - pol_v^2)] /
    sqrt(gamma_rot^2 + pol_v^2 (1 - gamma_rot^2)).
    Equal to epsilon_star(pol_v, gamma) when gamma_rot = gamma.
    """
    pol_v = _check_unit_interval("pol_v", pol_v)
    gamma = _check_unit_interval("gamma", gamma)
    gamma_rot = _check_unit_interval("gamma_rot", gamma_rot)
    denom = math.sqrt(gamma_rot**2 + pol_v**2 * (1.0 - gamma_rot**2))
    if denom == 0.0:
        # pol_v = gamma_rot = 0: the rotation degenerates to the identity.
        return pol_v
    return (pol_v**2 + gamma * gamma_rot * (1.0 - pol_v**2)) / denom


def gamma_inf(pol_v: float, gamma_rot: float) -> float:
    """Least true coherence for which the gamma_rot rotation still cools.

    pol_v (sqrt(D) - pol_v) / (gamma_rot (1 - pol_v^2)) with
    D = pol_v^2 + gamma_rot^2 (1 - pol_v^2); the exact root of
    epsilon_after_rotation(pol_v, g, gamma_rot) = pol_v.
    """
    pol_v = _check_unit_interval("pol_v", pol_v)
    gamma_rot = _check_unit_interval("gamma_rot", gamma_rot)
    if gamma_rot == 0.0:
        raise DivisionDomain("gamma_rot=0 applies no rotation; no coherence bound exists")
    if pol_v == 0.0:
        return 0.0
    if pol_v == 1.0:
        raise DivisionDomain("pol_v=1 leaves no coherence budget (denominator vanishes)")
    d = pol_v**2 + gamma_rot**2 * (1.0 - pol_v**2)
    return pol_v * (math.sqrt(d) - pol_v) / (gamma_rot * (1.0 - pol_v**2))


def cooling_region(pol_v: float, gamma: float) -> CoolingRegion:
    """Classify which rotation strengths improve the polarization.

    gamma >= 1/2 cools for every rotation; below that, small enough pol_v
    still cools unconditionally, and otherwise only rotations with
    gamma_rot below 2 pol_v^2 gamma / [pol_v^2 - gamma^2 (1 - pol_v^2)]
    cool. A zero bound (gamma = 0 with pol_v > 0) means every rotation
    heats.
    """
    pol_v = _check_unit_interval("pol_v", pol_v)
    gamma = _check_unit_interval("gamma", gamma)
    if gamma >= 0.5:
        return CoolingRegion(CoolingRegionKind.ALWAYS_COOLS)
    if pol_v <= gamma / (1.0 - gamma):
        return CoolingRegion(CoolingRegionKind.COOLS_FOR_ALL_ROTATIONS)
    bound = 2.0 * pol_v**2 * gamma / (pol_v**2 - gamma**2 * (1.0 - pol_v**2))
    if bound <= 0.0:
        return CoolingRegion(CoolingRegionKind.HEATS)
    return CoolingRegion(CoolingRegionKind.COOLS_IF_ROTATION_BOUNDED, gamma_rot_max=bound)


def t_min_bound(T: float, omega: float, Omega: float) -> float:
    """Least temperature reachable with level splittings omega <= Omega: T omega / Omega."""
    if T < 0.0:
        raise InvalidParameter(f"T={T} must be nonnegative")
    if Omega <= 0.0 or omega <= 0.0:
        raise InvalidParameter("level splittings must be positive")
    if omega > Omega:
        raise InvalidParameter(f"omega={omega} must not exceed Omega={Omega}")
    return T * omega / Omega
