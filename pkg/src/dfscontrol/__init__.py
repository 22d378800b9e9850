"""Adiabatic control of decoherence-free subspaces in a collective atom-cavity system.

The package simulates N two-level atoms in the symmetric Dicke manifold under
the effective master equation with jump operator
sqrt(gamma_c) (J^- + mu^2 J^+ + chi), builds that operator's eigenstructure in
closed form, evaluates the adiabaticity criterion for time-varying drives, and
reproduces the driving-scheme experiments as data files.
"""

from .adiabaticity import (
    AdiabaticityReport,
    Xi,
    derivative_overlap,
    scan_xi,
    xi_k,
    xi_kf,
    xi_single_particle,
)
from .dicke import (
    CollectiveOps,
    DickeKet,
    bloch_angle_grid,
    bloch_overlap_map,
    build_collective_ops,
    ground_state,
    spin_coherent_state,
)
from .eigenstructure import (
    JumpParams,
    OverlapCoefficients,
    chi_for_dark,
    complementary_overlap,
    complementary_state,
    cross_overlap,
    eigenstate,
    eigenstate_overlap,
    jump_eigenvalue,
    normalization_Nk,
    normalization_Nn_perp,
)
from .errors import (
    ConfigError,
    IntegrationDivergedError,
    SingularParameterError,
    UnknownFigureError,
)
from .lindblad import (
    DensityMatrix,
    EvolveResult,
    IntegratorConfig,
    ObservableSample,
    assemble_jump,
    default_time_step,
    effective_hamiltonian,
    evolve,
    fidelity,
    lindblad_rhs,
    purity,
)
from .parameters import PhysicalParams, ValidityCheck, effective_params, validity_report
from .schedules import (
    QScanResult,
    Schedule,
    chi_of,
    linear_schedule,
    optimize_q,
    piecewise_schedule,
    quench_initial_fidelity,
    quench_schedule,
)

__version__ = "0.1.0"
