"""Dense complex linear algebra for small multi-qubit systems.

Provides validated density matrices with subsystem metadata, tensor
composition and partial trace, column-stacking vectorization, quantum
channels (Kraus and superoperator-matrix forms), and stationary-state
extraction.

Conventions
-----------
* ``vectorize`` stacks columns: for a qubit the entry order is
  (rho_00, rho_10, rho_01, rho_11).
* The superoperator ("natural") matrix ``phi`` satisfies
  ``phi @ vectorize(rho) == vectorize(channel(rho))``; under column
  stacking this is ``sum_mu kron(conj(K_mu), K_mu)``.
* Spectral decompositions order eigenvalues descending, and each
  eigenvector's phase is fixed so its first nonzero component is real
  and positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .errors import (
    InvalidChannel,
    InvalidParameter,
    InvalidSubsystem,
    NonUniqueFixedPoint,
    NumericalError,
)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)

KET_0 = np.array([1.0, 0.0], dtype=complex)
KET_1 = np.array([0.0, 1.0], dtype=complex)


def _as_matrix(state) -> np.ndarray:
    """Accept either a DensityMatrix or a bare ndarray."""
    return state.data if isinstance(state, DensityMatrix) else np.asarray(state, dtype=complex)


class DensityMatrix:
    """A density matrix together with its tensor-factor dimensions.

    Validation enforces Hermiticity, unit trace, and positive
    semidefiniteness at the package tolerances. ``subsystem_dims``
    records the ordered factor dimensions (e.g. ``(2, 2, 2)`` for three
    qubits) so reductions know where to cut.
    """

    __slots__ = ("data", "subsystem_dims")

    def __init__(self, data, subsystem_dims=None, *, validate: bool = True):
        arr = np.array(data, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidParameter(f"state must be a square matrix, got shape {arr.shape}")
        if subsystem_dims is None:
            subsystem_dims = (arr.shape[0],)
        dims = tuple(int(d) for d in subsystem_dims)
        if any(d < 1 for d in dims) or int(np.prod(dims)) != arr.shape[0]:
            raise InvalidSubsystem(
                f"subsystem dims {dims} do not factor a {arr.shape[0]}-dimensional state"
            )
        self.data = arr
        self.subsystem_dims = dims
        if validate:
            self.validate()

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def validate(self) -> None:
        herm_defect = float(np.max(np.abs(self.data - self.data.conj().T)))
        if herm_defect > tol.HERMITICITY_ATOL:
            raise InvalidParameter(f"state is not Hermitian (defect {herm_defect:.3e})")
        trace_defect = abs(complex(np.trace(self.data)) - 1.0)
        if trace_defect > tol.TRACE_ATOL:
            raise InvalidParameter(f"state trace differs from 1 by {trace_defect:.3e}")
        smallest = float(np.min(np.linalg.eigvalsh(0.5 * (self.data + self.data.conj().T))))
        if smallest < tol.PSD_EIG_FLOOR:
            raise InvalidParameter(f"state has negative eigenvalue {smallest:.3e}")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"DensityMatrix(dim={self.dim}, subsystem_dims={self.subsystem_dims})"


def hermitize(matrix: np.ndarray) -> np.ndarray:
    """Symmetrize away floating-point anti-Hermitian noise."""
    return 0.5 * (matrix + matrix.conj().T)


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Tensor product of two states; factor metadata is concatenated."""
    return DensityMatrix(
        np.kron(_as_matrix(a), _as_matrix(b)),
        subsystem_dims=tuple(a.subsystem_dims) + tuple(b.subsystem_dims),
    )


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every tensor factor not listed in ``keep``.

    ``keep`` holds zero-based factor indices; their relative order is
    preserved in the result.
    """
    dims = rho.subsystem_dims
    keep = tuple(int(k) for k in keep)
    if len(set(keep)) != len(keep):
        raise InvalidSubsystem(f"duplicate indices in keep={keep}")
    for k in keep:
        if k < 0 or k >= len(dims):
            raise InvalidSubsystem(f"subsystem index {k} out of range for {len(dims)} factors")

    n = len(dims)
    tens = rho.data.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # Contract row/column axes of each traced factor, highest axis first
    # so the remaining axis numbering stays valid.
    for i in sorted(traced, reverse=True):
        tens = np.trace(tens, axis1=i, axis2=i + tens.ndim // 2)
    kept_dims = tuple(dims[k] for k in sorted(keep))
    d_out = int(np.prod(kept_dims)) if kept_dims else 1
    out = tens.reshape(d_out, d_out)
    if tuple(sorted(keep)) != keep:
        # Reorder kept factors to the order requested.
        perm = [sorted(keep).index(k) for k in keep]
        t = out.reshape(kept_dims + kept_dims)
        axes = perm + [p + len(kept_dims) for p in perm]
        t = np.transpose(t, axes)
        out = t.reshape(d_out, d_out)
    return DensityMatrix(hermitize(out), subsystem_dims=tuple(dims[k] for k in keep))


def vectorize(rho) -> np.ndarray:
    """Column-stack a matrix into a vector (Fortran order)."""
    return _as_matrix(rho).flatten(order="F")


def unvectorize(vec: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    vec = np.asarray(vec, dtype=complex)
    d = int(round(np.sqrt(vec.size)))
    if d * d != vec.size:
        raise InvalidParameter(f"vector length {vec.size} is not a perfect square")
    return vec.reshape((d, d), order="F")


def bloch_vector(rho) -> np.ndarray:
    """(x, y, z) components of a qubit state."""
    m = _as_matrix(rho)
    if m.shape != (2, 2):
        raise InvalidParameter("Bloch coordinates are defined for qubits only")
    return np.array(
        [
            np.trace(m @ SIGMA_X).real,
            np.trace(m @ SIGMA_Y).real,
            np.trace(m @ SIGMA_Z).real,
        ]
    )


def trace_distance(a, b) -> float:
    """Half the trace norm of the difference of two states."""
    delta = hermitize(_as_matrix(a) - _as_matrix(b))
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(delta))))


def eigh_descending(matrix: np.ndarray):
    """Hermitian eigendecomposition, eigenvalues descending.

    Each eigenvector's global phase is fixed so that its first component
    larger than 1e-12 in magnitude is real and positive, which makes
    downstream transition amplitudes deterministic.
    """
    vals, vecs = np.linalg.eigh(np.asarray(matrix, dtype=complex))
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    vecs = vecs[:, order]
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            pivot = col[nz[0]]
            vecs[:, j] = col * (pivot.conj() / abs(pivot))
    return vals, vecs


def random_density(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Haar-ish random full-rank test state (Ginibre construction)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, subsystem_dims=(dim,))


@dataclass(frozen=True)
class ChannelRep:
    """A quantum channel as a Kraus list and/or a superoperator matrix.

    ``natural`` acts on column-stacked states; ``kraus`` may be None when
    only the matrix form is known.
    """

    natural: np.ndarray
    kraus: tuple | None
    input_dim: int
    output_dim: int


def kraus_to_natural(kraus) -> np.ndarray:
    ks = [np.asarray(k, dtype=complex) for k in kraus]
    return sum(np.kron(k.conj(), k) for k in ks)


def natural_rep(kraus) -> ChannelRep:
    """Build a channel from Kraus operators, checking trace preservation."""
    ks = tuple(np.asarray(k, dtype=complex) for k in kraus)
    if not ks:
        raise InvalidChannel("empty Kraus list")
    d_out, d_in = ks[0].shape
    s = sum(k.conj().T @ k for k in ks)
    defect = float(np.max(np.abs(s - np.eye(d_in))))
    if defect > tol.TRACE_PRESERVATION_ATOL:
        raise InvalidChannel(f"Kraus set is not trace preserving (defect {defect:.3e})")
    return ChannelRep(natural=kraus_to_natural(ks), kraus=ks, input_dim=d_in, output_dim=d_out)


def channel_matrix_rep(phi: np.ndarray, *, input_dim: int | None = None) -> ChannelRep:
    """Wrap a bare superoperator matrix (no Kraus form available)."""
    phi = np.asarray(phi, dtype=complex)
    d_in = input_dim or int(round(np.sqrt(phi.shape[1])))
    d_out = int(round(np.sqrt(phi.shape[0])))
    return ChannelRep(natural=phi, kraus=None, input_dim=d_in, output_dim=d_out)


def apply_channel(channel: ChannelRep, rho):
    """Apply a channel to a state; returns the same flavor as the input."""
    mat = _as_matrix(rho)
    if channel.kraus is not None:
        out = sum(k @ mat @ k.conj().T for k in channel.kraus)
    else:
        out = unvectorize(channel.natural @ vectorize(mat))
    out = hermitize(out)
    if isinstance(rho, DensityMatrix):
        return DensityMatrix(out, subsystem_dims=(channel.output_dim,))
    return out


def choi_matrix(channel: ChannelRep) -> np.ndarray:
    """Choi matrix; positive semidefiniteness of this is complete positivity."""
    if channel.kraus is not None:
        vecs = [vectorize(k) for k in channel.kraus]
        return sum(np.outer(v, v.conj()) for v in vecs)
    d_in, d_out = channel.input_dim, channel.output_dim
    t = channel.natural.reshape(d_out, d_out, d_in, d_in)
    return t.transpose(3, 1, 2, 0).reshape(d_in * d_out, d_in * d_out)


def is_trace_preserving(channel: ChannelRep, atol: float = tol.TRACE_PRESERVATION_ATOL) -> bool:
    if channel.kraus is not None:
        s = sum(k.conj().T @ k for k in channel.kraus)
        return float(np.max(np.abs(s - np.eye(channel.input_dim)))) <= atol
    # Trace preservation in matrix form: vec(I)^dag . phi == vec(I)^dag
    vec_id = vectorize(np.eye(channel.output_dim, dtype=complex))
    row = vec_id.conj() @ channel.natural
    return float(np.max(np.abs(row - vectorize(np.eye(channel.input_dim))))) <= atol


def is_completely_positive(channel: ChannelRep, floor: float = tol.CHOI_PSD_FLOOR) -> bool:
    choi = hermitize(choi_matrix(channel))
    return float(np.min(np.linalg.eigvalsh(choi))) >= floor


def compatibility_defect(channel: ChannelRep, n_states: int = 20, seed: int = 7) -> float:
    """Worst-case disagreement between the Kraus action and the matrix action."""
    if channel.kraus is None:
        return 0.0
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_states):
        rho = random_density(channel.input_dim, rng).data
        direct = sum(k @ rho @ k.conj().T for k in channel.kraus)
        via_matrix = unvectorize(channel.natural @ vectorize(rho))
        worst = max(worst, float(np.max(np.abs(direct - via_matrix))))
    return worst


def channel_from_environment(unitary: np.ndarray, env_state: DensityMatrix, system_dim: int) -> ChannelRep:
    """Reduce ``rho -> tr_env[U (rho (x) env) U^dag]`` to Kraus form.

    The system factor comes first in the joint ordering. Environment
    eigenvalues below 1e-14 are dropped (rank-deficient preparations).
    """
    u = np.asarray(unitary, dtype=complex)
    env = _as_matrix(env_state)
    d_env = env.shape[0]
    if u.shape != (system_dim * d_env, system_dim * d_env):
        raise InvalidSubsystem(
            f"unitary of shape {u.shape} does not act on system ({system_dim}) x environment ({d_env})"
        )
    q, phis = eigh_descending(env)
    kraus = []
    eye_s = np.eye(system_dim, dtype=complex)
    for mu in range(d_env):
        if q[mu] < 1e-14:
            continue
        inject = np.kron(eye_s, phis[:, mu].reshape(d_env, 1))
        for nu in range(d_env):
            extract = np.kron(eye_s, np.eye(d_env, dtype=complex)[nu].reshape(1, d_env))
            kraus.append(np.sqrt(q[mu]) * (extract @ u @ inject))
    return natural_rep(kraus)


def fixed_point(channel: ChannelRep) -> DensityMatrix:
    """Stationary state of a channel.

    Uses the eigenvector of the superoperator matrix at the eigenvalue
    closest to 1; falls back to power iteration when the eigenvector is
    numerically poor. A unit eigenvalue of multiplicity above one means
    there is no unique answer and raises :class:`NonUniqueFixedPoint`.
    """
    phi = channel.natural
    w, v = np.linalg.eig(phi)
    near_unit = np.abs(w - 1.0) < tol.FIXED_POINT_DEGENERACY_GAP
    if int(np.sum(near_unit)) > 1:
        raise NonUniqueFixedPoint(
            f"unit eigenvalue has multiplicity {int(np.sum(near_unit))}; stationary state not unique"
        )
    idx = int(np.argmin(np.abs(w - 1.0)))
    cand = hermitize(unvectorize(v[:, idx]))
    tr = float(np.trace(cand).real)
    if abs(tr) > 1e-12:
        cand = cand / tr
        resid = float(np.max(np.abs(phi @ vectorize(cand) - vectorize(cand))))
        if resid <= 1e-10:
            return DensityMatrix(hermitize(cand), subsystem_dims=(channel.output_dim,))
    return _fixed_point_by_iteration(channel)


def _fixed_point_by_iteration(channel: ChannelRep) -> DensityMatrix:
    d = channel.input_dim
    rho = np.eye(d, dtype=complex) / d
    for _ in range(tol.POWER_ITER_MAX):
        nxt = hermitize(unvectorize(channel.natural @ vectorize(rho)))
        nxt = nxt / np.trace(nxt).real
        if float(np.max(np.abs(nxt - rho))) <= tol.POWER_ITER_TOL:
            return DensityMatrix(nxt, subsystem_dims=(d,))
        rho = nxt
    raise NumericalError("power iteration for the stationary state did not converge")
