"""Adiabaticity diagnostics for following a moving dark state.

Sweeping mu couples the target eigenstate |psi_k> only to its neighbors
k +/- 1; the residual coupling over the dissipative gap defines the
dimensionless xi_k, and the adiabaticity parameter Xi_k = mu_dot * xi_k /
(gamma_c sqrt(1 + nu^2)) must stay well below one for the state to follow.
All matrix elements are evaluated through the closed-form overlap sums in the
log domain, so scans remain exact at large atom number; dense matrix
sandwiches are deliberately left to the tests as the independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._logdomain import log_factorial
from .eigenstructure import (
    MU_SINGULAR,
    _log_norm_k,
    _log_norm_perp,
    complementary_overlap,
)
from .errors import SingularParameterError

#: for more than one atom, xi_k carries a 1/mu prefactor with no finite
#: mu -> 0 limit; evaluation below this is refused (the single-atom closed
#: form stays finite and is evaluated for any mu > 0).
MU_XI_SINGULAR = 1e-6


def xi_kf(n_atoms: int, k: int) -> float:
    """Closed-form final value xi_k(mu=1).

    sqrt((N-k)(k+1)) for k < N/2 and sqrt((N-k+1)k) above; grows like sqrt(N)
    at the edge of the spectrum and like N/2 in the middle.
    """
    if not 0 <= k <= n_atoms:
        raise ValueError(f"k must lie in [0, {n_atoms}], got {k}")
    if k < n_atoms / 2.0:
        return math.sqrt((n_atoms - k) * (k + 1.0))
    return math.sqrt((n_atoms - k + 1.0) * k)


def xi_single_particle(mu: float) -> float:
    """Single-atom closed form of xi_0.

    |4 / (2 mu^2 (1+mu^2) - (1-mu^4)(mu^2-1)/2)|; equals 8 as mu -> 0 and 1
    at mu = 1. The mu_dot/(gamma_c sqrt(1+nu^2)) prefactor lives in Xi.
    """
    if mu <= 0.0:
        raise ValueError(f"mu must be positive, got {mu!r}")
    m2 = mu * mu
    denom = 2.0 * m2 * (1.0 + m2) - (1.0 - m2 * m2) * (m2 - 1.0) / 2.0
    return abs(4.0 / denom)


def Xi(xi: float, mu_dot: float, gamma_c: float = 1.0, nu: float = 0.0) -> float:
    """Adiabaticity parameter mu_dot * xi / (gamma_c sqrt(1 + nu^2))."""
    if not gamma_c > 0.0:
        raise ValueError(f"gamma_c must be positive, got {gamma_c!r}")
    return mu_dot * xi / (gamma_c * math.sqrt(1.0 + nu * nu))


def _log_jz_cross(n_atoms: int, k: int, n: int, mu: float) -> float:
    """log |<psi_n_perp| J^z |psi_k>| for n = k +/- 1 (the element is negative)."""
    if n == k + 1:
        log_fac = log_factorial(float(n_atoms - k)) + log_factorial(float(k + 1))
    else:
        log_fac = log_factorial(float(n_atoms - k + 1)) + log_factorial(float(k))
    return (
        -math.log(2.0)
        + n_atoms * math.log(2.0 * mu)
        + _log_norm_k(n_atoms, k, mu)
        + _log_norm_perp(n_atoms, n, mu)
        + log_fac
    )


def _jz_perp_diag(n_atoms: int, n: int, mu: float) -> float:
    """<psi_n_perp| J^z |psi_n_perp> through the complementary-overlap sums."""
    log_nn = _log_norm_perp(n_atoms, n, mu)
    total = 0.0
    if n < n_atoms:
        ratio = math.exp(log_nn - _log_norm_perp(n_atoms, n + 1, mu))
        total += (n_atoms - n) * ratio * complementary_overlap(n_atoms, n, n + 1, mu)
    if n > 0:
        ratio = math.exp(log_nn - _log_norm_perp(n_atoms, n - 1, mu))
        total += n * ratio * complementary_overlap(n_atoms, n - 1, n, mu)
    return -0.5 * total


def derivative_overlap(n_atoms: int, k: int, n: int, mu: float, mu_dot: float) -> float:
    """<psi_n_perp | d/dt psi_k>, nonzero only for the neighbors n = k +/- 1.

    Equals -mu_dot (2 mu)^(N-1) N_k [N_{k+1}_perp (N-k)!(k+1)! at n=k+1, or
    N_{k-1}_perp (N-k+1)! k! at n=k-1]; real with the package phase
    convention.
    """
    if not 0 <= k <= n_atoms:
        raise ValueError(f"k must lie in [0, {n_atoms}], got {k}")
    if abs(n - k) != 1 or not 0 <= n <= n_atoms:
        raise ValueError(
            f"derivative couples only to neighbors k +/- 1 inside [0, N]; "
            f"got n={n} for k={k}, N={n_atoms}"
        )
    if mu <= MU_SINGULAR:
        raise SingularParameterError(
            f"derivative overlaps are singular for mu <= {MU_SINGULAR}, got {mu!r}"
        )
    # <psi_n_perp|d/dt psi_k> = (mu_dot / mu) <psi_n_perp|J^z|psi_k>
    magnitude = math.exp(_log_jz_cross(n_atoms, k, n, mu) - math.log(mu))
    return -mu_dot * magnitude


def xi_k(n_atoms: int, k: int, mu: float) -> tuple[float, int]:
    """Dimensionless adiabaticity ratio xi_k and the neighbor that attains it.

    xi_k = max over n = k +/- 1 of |4 <psi_n_perp|J^z|psi_k> /
    (mu [2 mu^2 + (1 - mu^4) <psi_n_perp|J^z|psi_n_perp>])|. Ties prefer the
    upper branch. For N = 1 the expression stays finite for every mu > 0; for
    N > 1 values below MU_XI_SINGULAR are refused.
    """
    if not 0 <= k <= n_atoms:
        raise ValueError(f"k must lie in [0, {n_atoms}], got {k}")
    if mu <= 0.0:
        raise ValueError(f"mu must be positive, got {mu!r}")
    if n_atoms > 1 and mu < MU_XI_SINGULAR:
        raise SingularParameterError(
            f"xi_k has no finite mu -> 0 limit for N > 1; need mu >= {MU_XI_SINGULAR}"
        )
    best_val = -math.inf
    best_branch = k
    for n in (k + 1, k - 1):
        if not 0 <= n <= n_atoms:
            continue
        numerator = 4.0 * math.exp(_log_jz_cross(n_atoms, k, n, mu))
        denominator = mu * abs(
            2.0 * mu * mu + (1.0 - mu**4) * _jz_perp_diag(n_atoms, n, mu)
        )
        val = numerator / denominator
        if val > best_val:
            best_val = val
            best_branch = n
    return best_val, best_branch


@dataclass(frozen=True)
class AdiabaticityReport:
    """xi_k along a mu grid, with the ratio to its final value and branches."""

    n_atoms: int
    k: int
    mu_grid: np.ndarray
    xi: np.ndarray
    xi_ratio: np.ndarray
    branch: np.ndarray
    Xi: np.ndarray | None = None


def scan_xi(
    n_atoms: int,
    k: int,
    mu_grid,
    mu_dot: float | None = None,
    gamma_c: float = 1.0,
    nu: float = 0.0,
) -> AdiabaticityReport:
    """Evaluate xi_k over a mu grid (optionally Xi for a given sweep rate)."""
    grid = np.asarray(list(mu_grid), dtype=float)
    if grid.size == 0:
        raise ValueError("mu grid must not be empty")
    xi_vals = np.empty(grid.size)
    branches = np.empty(grid.size, dtype=int)
    for idx, mu in enumerate(grid):
        xi_vals[idx], branches[idx] = xi_k(n_atoms, k, float(mu))
    final = xi_kf(n_atoms, k)
    big = None
    if mu_dot is not None:
        big = np.array([Xi(x, mu_dot, gamma_c, nu) for x in xi_vals])
    return AdiabaticityReport(
        n_atoms=n_atoms,
        k=k,
        mu_grid=grid,
        xi=xi_vals,
        xi_ratio=xi_vals / final,
        branch=branches,
        Xi=big,
    )
