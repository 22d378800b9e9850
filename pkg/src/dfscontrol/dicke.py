"""Symmetric Dicke-manifold basis, collective spin operators, and spin coherent states.

Everything lives in the (N+1)-dimensional J = N/2 manifold. Basis ordering is
fixed package-wide: index i holds |J = N/2, m = -N/2 + i>, i.e. the state with
i atoms up, so index 0 is the collective ground state and index N is all-up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._logdomain import log_binomial

NORM_TOL = 1e-12


@dataclass(frozen=True)
class DickeKet:
    """Complex amplitude vector over the N+1 symmetric Dicke states."""

    n_atoms: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be a positive integer")
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.n_atoms + 1,):
            raise ValueError(
                f"amplitudes must have length N+1 = {self.n_atoms + 1}, got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def require_normalized(self, tol: float = NORM_TOL) -> "DickeKet":
        if not self.is_normalized(tol):
            raise ValueError(f"state is not normalized: |amplitudes| = {self.norm()!r}")
        return self


def ground_state(n_atoms: int) -> DickeKet:
    """All atoms down, |J, m = -J>."""
    amps = np.zeros(n_atoms + 1, dtype=complex)
    amps[0] = 1.0
    return DickeKet(n_atoms, amps)


def ladder_strengths(n_atoms: int) -> np.ndarray:
    """Off-diagonal ladder elements: entry i couples indices i <-> i+1.

    <i|J^-|i+1> = <i+1|J^+|i> = sqrt((i+1)(N-i)).
    """
    i = np.arange(n_atoms, dtype=float)
    return np.sqrt((i + 1.0) * (n_atoms - i))


@dataclass(frozen=True)
class CollectiveOps:
    """Dense collective spin operators on the symmetric manifold."""

    n_atoms: int
    j_plus: np.ndarray
    j_minus: np.ndarray
    j_z: np.ndarray
    identity: np.ndarray


def build_collective_ops(n_atoms: int) -> CollectiveOps:
    """Construct J^+, J^-, J^z and the identity for N atoms.

    Matrix elements follow the usual angular-momentum ladder algebra with
    J = N/2; J^z is diagonal with entries m = -N/2 ... N/2.
    """
    if n_atoms < 1:
        raise ValueError("n_atoms must be a positive integer")
    d = n_atoms + 1
    lad = ladder_strengths(n_atoms)
    j_minus = np.zeros((d, d))
    j_minus[np.arange(d - 1), np.arange(1, d)] = lad
    j_plus = j_minus.T.copy()
    j_z = np.diag(np.arange(d) - n_atoms / 2.0)
    return CollectiveOps(n_atoms, j_plus, j_minus, j_z, np.eye(d))


def spin_coherent_state(n_atoms: int, theta: float, phi: float) -> DickeKet:
    """Spin coherent state |theta, phi> on the collective Bloch sphere.

    Every atom points along (theta, phi): theta=0 is all-up (+z), theta=pi/2,
    phi=0 is the +x coherent state. Amplitude at i atoms up is
    sqrt(C(N, i)) cos(theta/2)^i (sin(theta/2) e^{i phi})^{N-i}; binomials go
    through log-gamma so large N cannot overflow.

    Parameters
    ----------
    n_atoms : int
        Number of atoms N >= 1.
    theta : float
        Polar angle in [0, pi].
    phi : float
        Azimuthal angle in [0, 2*pi).
    """
    if n_atoms < 1:
        raise ValueError("n_atoms must be a positive integer")
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    if not 0.0 <= phi < 2.0 * math.pi:
        raise ValueError(f"phi must lie in [0, 2*pi), got {phi!r}")

    amps = np.zeros(n_atoms + 1, dtype=complex)
    if theta == 0.0:
        amps[-1] = 1.0
        return DickeKet(n_atoms, amps)
    if theta == math.pi:
        amps[0] = 1.0
        return DickeKet(n_atoms, amps)

    i = np.arange(n_atoms + 1, dtype=float)
    log_mag = (
        0.5 * log_binomial(n_atoms, i)
        + i * math.log(math.cos(theta / 2.0))
        + (n_atoms - i) * math.log(math.sin(theta / 2.0))
    )
    amps = np.exp(log_mag) * np.exp(1j * (n_atoms - i) * phi)
    return DickeKet(n_atoms, amps)


def bloch_angle_grid(theta_steps: int, phi_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Angle grid used by bloch_overlap_map: theta inclusive of both poles,
    phi uniform and half-open so 0 and 2*pi are not double counted."""
    if theta_steps < 2 or phi_steps < 2:
        raise ValueError("theta_steps and phi_steps must both be >= 2")
    thetas = np.linspace(0.0, math.pi, theta_steps)
    phis = np.arange(phi_steps) * (2.0 * math.pi / phi_steps)
    return thetas, phis


def bloch_overlap_map(state: DickeKet, theta_steps: int, phi_steps: int) -> np.ndarray:
    """Overlap density |<theta, phi|psi>|^2 on the collective Bloch sphere.

    Returns a (theta_steps, phi_steps) array, rows indexed by theta and
    columns by phi on the grid of :func:`bloch_angle_grid`. The state must be
    normalized.
    """
    state.require_normalized()
    thetas, phis = bloch_angle_grid(theta_steps, phi_steps)
    n = state.n_atoms
    i = np.arange(n + 1, dtype=float)

    # <theta,phi|psi> = sum_i conj(a_i(theta) e^{i phi (N-i)}) psi_i factors
    # into a (theta x i) real part times a phase matrix, one matmul per map.
    log_binom_half = 0.5 * log_binomial(n, i)
    w = np.zeros((theta_steps, n + 1), dtype=complex)
    for row, theta in enumerate(thetas):
        if theta == 0.0:
            coh = np.zeros(n + 1)
            coh[-1] = 1.0
        elif theta == math.pi:
            coh = np.zeros(n + 1)
            coh[0] = 1.0
        else:
            coh = np.exp(
                log_binom_half
                + i * math.log(math.cos(theta / 2.0))
                + (n - i) * math.log(math.sin(theta / 2.0))
            )
        w[row] = coh * state.amplitudes
    phase = np.exp(-1j * np.outer(n - i, phis))
    overlap = w @ phase
    return np.abs(overlap) ** 2
