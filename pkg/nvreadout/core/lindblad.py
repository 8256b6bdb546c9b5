"""
Lindblad dynamics of the effective two-level spin

Basis: index 0 is |g> (m_s = 0), index 1 is |e> (m_s = -1), with
sigma_z |g> = +|g>. Density matrices are vectorized row-major
(``rho.reshape(-1)``), so vec(A rho B) = (A kron B^T) vec(rho).
"""

import logging
import math
from typing import List, Sequence

import numpy as np
import scipy.linalg

from nvreadout.core.exceptions import (
    IllPosedSteadyStateError,
    InvalidInputError,
    StabilityError,
)
from nvreadout.models.schemas import (
    DensityMatrix,
    DissipatorChannel,
    LevelPopulations,
    PopulationCurve,
    SpinModel,
    Superoperator,
)

logger = logging.getLogger(__name__)

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_PLUS = 0.5 * (SIGMA_X + 1.0j * SIGMA_Y)
SIGMA_MINUS = 0.5 * (SIGMA_X - 1.0j * SIGMA_Y)

# |g><e| and |e><g|. With |g> first, sigma_plus is the energy-lowering jump.
LOWERING = SIGMA_PLUS
RAISING = SIGMA_MINUS

TRACE_ROW = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex)

HERMITIAN_TOL = 1e-10
NULLSPACE_TOL = 1e-12
RESIDUAL_TOL = 1e-10
MAX_STEP_RADIUS = 0.1
EVOLVE_TOL = 1e-9


def rwa_hamiltonian(detuning: float, rabi: float) -> np.ndarray:
    """
    Rotating-frame Hamiltonian of the driven spin.

    Args:
        detuning: omega - omega_sys (rad/s)
        rabi: Rabi frequency Omega_R (rad/s)

    Returns:
        (detuning/2) sigma_z - (rabi/2) sigma_x
    """
    return 0.5 * detuning * SIGMA_Z - 0.5 * rabi * SIGMA_X


def dissipators_for(spin: SpinModel) -> List[DissipatorChannel]:
    """Jump operators for pumping, relaxation, thermal excitation and dephasing."""
    candidates = [
        DissipatorChannel(jump=LOWERING, rate=spin.pump_rate, label="pump"),
        DissipatorChannel(jump=LOWERING, rate=spin.t1_rate, label="t1"),
        DissipatorChannel(jump=RAISING, rate=spin.thermal_rate, label="thermal"),
        # sigma_z at rate r damps the coherence at 2r
        DissipatorChannel(
            jump=SIGMA_Z, rate=spin.dephasing_rate / 2.0, label="dephasing"
        ),
    ]
    return [channel for channel in candidates if channel.rate > 0]


def liouvillian(h: np.ndarray, channels: Sequence[DissipatorChannel]) -> Superoperator:
    """
    Build the Lindblad superoperator.

    Args:
        h: 2x2 Hermitian Hamiltonian (rad/s)
        channels: dissipator channels L_j with their rates

    Returns:
        Superoperator M with vec(d rho/dt) = M vec(rho)
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (2, 2):
        raise InvalidInputError(f"Hamiltonian must be 2x2, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs(h - h.conj().T)) > HERMITIAN_TOL * scale:
        raise InvalidInputError("Hamiltonian is not Hermitian")

    entries = -1.0j * (np.kron(h, IDENTITY) - np.kron(IDENTITY, h.T))
    for channel in channels:
        jump = channel.jump
        jump_dag_jump = jump.conj().T @ jump
        entries = entries + channel.rate * (
            np.kron(jump, jump.conj())
            - 0.5 * np.kron(jump_dag_jump, IDENTITY)
            - 0.5 * np.kron(IDENTITY, jump_dag_jump.T)
        )
    return Superoperator(entries=entries)


def steady_state(l: Superoperator, tol: float = RESIDUAL_TOL) -> DensityMatrix:
    """
    Solve L vec(rho) = 0 with unit trace.

    The bordered system [L; trace row] vec(rho) = [0; 1] is solved on the
    Liouvillian normalized by its largest entry, by a least-squares
    factorization with column pivoting.

    Raises:
        IllPosedSteadyStateError: the null space of L is not one-dimensional
    """
    scale = float(np.max(np.abs(l.entries)))
    if scale == 0.0:
        raise IllPosedSteadyStateError(
            "Liouvillian is identically zero: every state is stationary"
        )
    normalized = l.entries / scale
    bordered = np.vstack([normalized, TRACE_ROW])
    rhs = np.array([0.0, 0.0, 0.0, 0.0, 1.0], dtype=complex)

    singular_values = scipy.linalg.svdvals(bordered)
    if singular_values[-1] < NULLSPACE_TOL * singular_values[0]:
        raise IllPosedSteadyStateError(
            "Liouvillian null space is degenerate; at least one population-mixing "
            "channel (pump, T1 or thermal) is required"
        )

    solution, _, _, _ = scipy.linalg.lstsq(bordered, rhs, lapack_driver="gelsy")
    residual = float(np.linalg.norm(normalized @ solution))
    logger.debug(f"Steady-state residual {residual:.3e}")
    if residual > tol:
        raise IllPosedSteadyStateError(
            f"steady-state residual {residual:.3e} exceeds tolerance {tol:.1e}"
        )

    rho = solution.reshape(2, 2)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(entries=rho / np.trace(rho).real)


def _rk4_propagator(entries: np.ndarray, step: float) -> np.ndarray:
    # For a constant generator the four RK stages collapse to this Taylor polynomial
    z = step * entries
    z2 = z @ z
    z3 = z2 @ z
    return np.eye(4, dtype=complex) + z + z2 / 2.0 + z3 / 6.0 + z3 @ z / 24.0


def evolve(
    l: Superoperator, rho0: DensityMatrix, duration: float, step: float
) -> DensityMatrix:
    """
    Integrate d vec(rho)/dt = L vec(rho) with classical fourth-order Runge-Kutta.

    Args:
        l: Liouvillian
        rho0: initial state
        duration: total time (s)
        step: fixed step (s); a shorter final step absorbs any remainder

    Returns:
        rho(duration)
    """
    if step <= 0:
        raise InvalidInputError(f"step must be positive, got {step}")
    if duration < 0:
        raise InvalidInputError(f"duration must be non-negative, got {duration}")
    radius = float(np.max(np.abs(np.linalg.eigvals(l.entries))))
    if step * radius >= MAX_STEP_RADIUS:
        raise StabilityError(
            f"step * spectral radius = {step * radius:.3g} must stay below {MAX_STEP_RADIUS}"
        )

    n_steps = int(math.floor(duration / step + 1e-9))
    remainder = duration - n_steps * step
    vec = rho0.vector()
    if n_steps > 0:
        vec = np.linalg.matrix_power(_rk4_propagator(l.entries, step), n_steps) @ vec
    if remainder > 1e-12 * step:
        vec = _rk4_propagator(l.entries, remainder) @ vec

    rho = vec.reshape(2, 2)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix.model_validate(
        {"entries": rho}, context={"tolerance": EVOLVE_TOL}
    )


def populations_of(rho: DensityMatrix, omega_sys: float = 0.0) -> LevelPopulations:
    p_g = min(max(float(rho.entries[0, 0].real), 0.0), 1.0)
    p_e = min(max(float(rho.entries[1, 1].real), 0.0), 1.0)
    total = p_g + p_e
    return LevelPopulations(
        p=(p_g / total, p_e / total),
        energies=(-omega_sys / 2.0, omega_sys / 2.0),
    )


def spin_liouvillian(spin: SpinModel, detuning: float) -> Superoperator:
    """Liouvillian of the spin driven at detuning omega - omega_sys."""
    if spin.downward_rate + spin.upward_rate <= 0:
        raise IllPosedSteadyStateError(
            "no population-mixing channel: pump, T1 and thermal rates are all zero"
        )
    return liouvillian(rwa_hamiltonian(detuning, spin.rabi), dissipators_for(spin))


def steady_populations(
    spin: SpinModel, detuning: float, tol: float = RESIDUAL_TOL
) -> LevelPopulations:
    """Stationary populations of the spin driven at detuning omega - omega_sys."""
    rho = steady_state(spin_liouvillian(spin, detuning), tol)
    return populations_of(rho, spin.omega_sys)


def population_curve(spin: SpinModel, detunings: Sequence[float]) -> PopulationCurve:
    """
    Steady-state populations along a drive-detuning axis.

    Args:
        spin: spin model
        detunings: strictly increasing omega - omega_sys values (rad/s)

    Returns:
        PopulationCurve with one LevelPopulations per detuning
    """
    axis = np.asarray(detunings, dtype=float)
    if axis.ndim != 1 or axis.size == 0:
        raise InvalidInputError("detunings must be a nonempty 1-D sequence")
    if axis.size > 1 and np.any(np.diff(axis) <= 0):
        raise InvalidInputError("detunings must be strictly increasing")

    populations = [steady_populations(spin, float(detuning)) for detuning in axis]
    logger.info(f"Solved {axis.size} steady states")
    return PopulationCurve(detunings=axis, populations=populations)
