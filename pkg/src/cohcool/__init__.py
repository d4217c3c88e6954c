"""Simulation and analysis toolkit for coherence-assisted qubit cooling."""

from ._version import __version__
from .bounds import (
    CoolingRegion,
    CoolingRegionKind,
    RotationSpec,
    VirtualQubitSpec,
    coherent_virtual_state,
    cooling_region,
    epsilon_after_rotation,
    epsilon_star,
    gamma_inf,
    inverse_temperature,
    make_rotation_spec,
    rotation_angle,
    rotation_unitary,
    t_min_bound,
    thermal_qubit,
)
from .errors import (
    CohcoolError,
    DivisionDomain,
    InvalidChannel,
    InvalidParameter,
    InvalidPolarization,
    InvalidSubsystem,
    NonUniqueFixedPoint,
    NumericalError,
    ScenarioError,
)
from .hbac import (
    GateNoise,
    HbacConfig,
    analytic_phi_n,
    analytic_rho1_n,
    apply_noisy_rotation,
    compression_unitary,
    confidence_band_sweep,
    cooling_cycle_channel,
    extract_virtual_qubit,
    hbac_channel,
    hbac_epsilon_star,
    hbac_iterate,
    initial_target_state,
    trajectory_rows,
    virtual_polarization,
)
from .ising import IsingConfig, gibbs_state, ising_hamiltonian, ising_virtual_coherence, scaling_check
from .multireset import epsilon_infinity, ratio_small_eps_expansion, resource_ratio
from .phase_ensemble import (
    AlphaRotRule,
    PhaseInterval,
    average_discrepancy,
    average_epsilon_closed,
    average_epsilon_numeric,
    ensemble_summary,
    epsilon_rotated,
    sample_ensemble,
)
from .qcore import (
    ChannelRep,
    DensityMatrix,
    apply_channel,
    bloch_vector,
    channel_from_environment,
    choi_matrix,
    compatibility_defect,
    fixed_point,
    is_completely_positive,
    is_trace_preserving,
    partial_trace,
    random_density,
    tensor,
    trace_distance,
)
from .thermo import ThermoRecord, cycle_energetics, coherent_energetic, thermo_series

__all__ = [name for name in dir() if not name.startswith("_")]
