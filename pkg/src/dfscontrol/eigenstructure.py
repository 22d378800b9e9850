"""Analytic eigenstructure of the collective jump operator.

The dimensionless jump operator J^- + mu^2 J^+ + chi is quadratic in Schwinger
modes, so its N+1 generalized eigenvectors |psi_k> (eigenvalue mu(N-2k)+chi)
and the right eigenvectors |psi_n_perp> of its adjoint have closed polynomial
forms. Expanding those polynomials with exact integer coefficients and doing
all factorial-bearing sums in the log domain keeps every overlap, norm and
matrix element stable for hundreds of atoms.

Phase convention (the physics fixes none): the lowest-m amplitude of every
constructed ket is real and non-negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ._logdomain import (
    log_binomial,
    log_factorial,
    pow_log,
    pow_log_array,
    signed_poly_coeffs,
)
from .dicke import DickeKet
from .errors import SingularParameterError

#: below this, constructions that involve the inverse Schwinger transform
#: (complementary states and everything built on them) are rejected.
MU_SINGULAR = 1e-9


@dataclass(frozen=True)
class JumpParams:
    """Effective drive parameters defining the jump operator at one instant.

    mu is the raising/lowering balance, chi the coherent cavity drive, nu the
    cavity detuning ratio; gamma_c sets the unit of rate (all dynamics here is
    expressed in units of 1/gamma_c).
    """

    mu: float
    chi: float
    gamma_c: float = 1.0
    nu: float = 0.0

    def __post_init__(self):
        if not self.gamma_c > 0.0:
            raise ValueError(f"gamma_c must be positive, got {self.gamma_c!r}")
        if not math.isfinite(self.mu) or self.mu < 0.0:
            raise ValueError(f"mu must be finite and >= 0, got {self.mu!r}")


@dataclass(frozen=True)
class OverlapCoefficients:
    """Decomposition coefficients entering the closed-form overlap sums.

    a1/a_perp split the second eigenmode along/orthogonal-to the first;
    b1/b_perp do the same for the adjoint modes.
    """

    a1: float
    a_perp: float
    b1: float
    b_perp: float

    @classmethod
    def from_ratio(cls, mu: float) -> "OverlapCoefficients":
        denom = 1.0 + mu * mu
        return cls(
            a1=(1.0 - mu * mu) / denom,
            a_perp=-2.0 * mu / denom,
            b1=(mu * mu - 1.0) / denom,
            b_perp=-2.0 * mu / denom,
        )


def _check_index(n_atoms: int, k: int, name: str = "k") -> None:
    if n_atoms < 1:
        raise ValueError("n_atoms must be a positive integer")
    if not 0 <= k <= n_atoms:
        raise ValueError(f"{name} must lie in [0, {n_atoms}], got {k}")


def chi_for_dark(n_atoms: int, k: int, mu: float) -> float:
    """Cavity drive that makes |psi_k> dark: chi = -mu (N - 2k)."""
    _check_index(n_atoms, k)
    return -mu * (n_atoms - 2 * k)


def jump_eigenvalue(n_atoms: int, k: int, mu: float, chi: float) -> float:
    """Dimensionless eigenvalue of the jump operator on |psi_k>: mu(N-2k) + chi."""
    _check_index(n_atoms, k)
    return mu * (n_atoms - 2 * k) + chi


def _log_norm_k(n_atoms: int, k: int, mu: float) -> float:
    """log of the eigenstate normalization factor N_k (so N_k = exp of this).

    1/N_k^2 = sum_i C(k,i) k! (N-k+i)! (1-mu^2)^{2i} (4 mu^2)^{k-i}
              / [i! (1+mu^2)^{2k-N}]; every term is non-negative, so the
    log-sum-exp is unconditionally stable. The 0**0 = 1 convention makes the
    expression continuous through mu = 1 and mu = 0.
    """
    n, mm = n_atoms, mu * mu
    i = np.arange(k + 1, dtype=float)
    log_one_minus_sq = pow_log(abs(1.0 - mm), 1.0)  # log|1 - mu^2|, -inf at mu=1
    log_four_mu_sq = pow_log(4.0 * mm, 1.0)  # log(4 mu^2), -inf at mu=0
    terms = (
        log_binomial(k, i)
        + log_factorial(float(k))
        + log_factorial(n - k + i)
        - log_factorial(i)
        - (2 * k - n) * math.log1p(mm)
        + pow_log_array(log_one_minus_sq, 2.0 * i)
        + pow_log_array(log_four_mu_sq, k - i)
    )
    return -0.5 * logsumexp(terms)


def _log_norm_perp(n_atoms: int, n_index: int, mu: float) -> float:
    """log of the complementary-state normalization factor N_n_perp.

    Identical sum to the eigenstate one: (mu^2-1)^{2i} = (1-mu^2)^{2i}.
    """
    return _log_norm_k(n_atoms, n_index, mu)


def normalization_Nk(n_atoms: int, k: int, mu: float) -> float:
    """Eigenstate normalization factor N_k as a positive real."""
    _check_index(n_atoms, k)
    if mu < 0.0:
        raise ValueError(f"mu must be >= 0, got {mu!r}")
    return math.exp(_log_norm_k(n_atoms, k, mu))


def normalization_Nn_perp(n_atoms: int, n: int, mu: float) -> float:
    """Complementary-state normalization factor N_n_perp as a positive real."""
    _check_index(n_atoms, n, "n")
    if mu <= MU_SINGULAR:
        raise SingularParameterError(
            f"complementary states are singular for mu <= {MU_SINGULAR}, got {mu!r}"
        )
    return math.exp(_log_norm_perp(n_atoms, n, mu))


def _polynomial_ket(n_atoms: int, index: int, mu: float, complementary: bool) -> DickeKet:
    """Expand the Schwinger polynomial into normalized Dicke amplitudes.

    Both families reduce to the integer coefficients g_i of
    (1+z)^{N-index} (1-z)^index; the eigenstate amplitude at i atoms up is
    proportional to sqrt(i!(N-i)!) mu^i g_i and the complementary one to
    sqrt(i!(N-i)!) mu^{N-i} g_i.
    """
    n = n_atoms
    coeffs = signed_poly_coeffs(n - index, index)
    log_mag = np.full(n + 1, -math.inf)
    sign = np.zeros(n + 1)
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mu_power = (n - i) if complementary else i
        log_mag[i] = (
            0.5 * (log_factorial(float(i)) + log_factorial(float(n - i)))
            + pow_log(mu, mu_power)
            + math.log(abs(c))
        )
        sign[i] = 1.0 if c > 0 else -1.0
    log_norm = 0.5 * logsumexp(2.0 * log_mag)
    amps = sign * np.exp(log_mag - log_norm)
    return DickeKet(n, amps.astype(complex))


def eigenstate(n_atoms: int, k: int, mu: float) -> DickeKet:
    """Normalized k-th generalized eigenvector of the jump operator.

    At mu = 0 the spectrum collapses and the unique dark state is the
    collective ground state, which is returned for every k. At mu = 1 these
    are the J^x eigenstates.
    """
    _check_index(n_atoms, k)
    if mu < 0.0:
        raise ValueError(f"mu must be >= 0, got {mu!r}")
    if mu == 0.0:
        from .dicke import ground_state

        return ground_state(n_atoms)
    return _polynomial_ket(n_atoms, k, mu, complementary=False)


def complementary_state(n_atoms: int, n: int, mu: float) -> DickeKet:
    """Normalized n-th right eigenvector of the adjoint jump operator.

    Together with the eigenstates these form a biorthogonal pair
    (see :func:`cross_overlap`). Undefined as mu -> 0, where the Schwinger
    transform is not invertible.
    """
    _check_index(n_atoms, n, "n")
    if mu <= MU_SINGULAR:
        raise SingularParameterError(
            f"complementary states are singular for mu <= {MU_SINGULAR}, got {mu!r}"
        )
    return _polynomial_ket(n_atoms, n, mu, complementary=True)


def _overlap_sum(n_atoms: int, lo: int, hi: int, mu: float, parallel_sign: float) -> float:
    """Shared double-binomial overlap sum for <psi_lo|psi_hi> style products.

    parallel_sign is the sign of the parallel decomposition coefficient
    (positive for the eigenstate family below mu=1, negative for the
    complementary family); its magnitude is |1-mu^2|/(1+mu^2) in both cases.
    """
    n, mm = n_atoms, mu * mu
    a1_mag = abs(1.0 - mm) / (1.0 + mm)
    ap_mag = 2.0 * mu / (1.0 + mm)
    if lo == hi and mu == 1.0:
        return 1.0
    log_n_lo = _log_norm_k(n, lo, mu)
    log_n_hi = _log_norm_k(n, hi, mu)
    i = np.arange(lo + 1, dtype=float)
    terms = (
        log_binomial(lo, i)
        + log_binomial(hi, hi - lo + i)
        + pow_log_array(pow_log(a1_mag, 1.0), 2.0 * i)
        + pow_log_array(pow_log(ap_mag, 1.0), 2.0 * (lo - i))
        + log_factorial(n - lo + i)
        + log_factorial(lo - i)
    )
    log_prefactor = (
        log_n_lo + log_n_hi + n * math.log1p(mm) + pow_log(a1_mag, float(hi - lo))
    )
    total = log_prefactor + logsumexp(terms)
    sign = parallel_sign ** (hi - lo) if hi != lo else 1.0
    return sign * math.exp(total)


def eigenstate_overlap(n_atoms: int, k_prime: int, k: int, mu: float) -> float:
    """<psi_k'|psi_k>, real with the package phase convention.

    The eigenbasis is orthonormal only at mu = 1; elsewhere neighboring
    states overlap substantially.
    """
    _check_index(n_atoms, k_prime, "k_prime")
    _check_index(n_atoms, k)
    if mu < 0.0:
        raise ValueError(f"mu must be >= 0, got {mu!r}")
    lo, hi = min(k_prime, k), max(k_prime, k)
    a1 = (1.0 - mu * mu) / (1.0 + mu * mu)
    if hi != lo and a1 == 0.0:
        return 0.0
    return _overlap_sum(n_atoms, lo, hi, mu, parallel_sign=math.copysign(1.0, a1))


def complementary_overlap(n_atoms: int, n_prime: int, n: int, mu: float) -> float:
    """<psi_n'_perp|psi_n_perp>; differs from the eigenstate overlap only by
    the sign of the parallel coefficient, b1 = -a1."""
    _check_index(n_atoms, n_prime, "n_prime")
    _check_index(n_atoms, n, "n")
    if mu < 0.0:
        raise ValueError(f"mu must be >= 0, got {mu!r}")
    lo, hi = min(n_prime, n), max(n_prime, n)
    b1 = (mu * mu - 1.0) / (1.0 + mu * mu)
    if hi != lo and b1 == 0.0:
        return 0.0
    return _overlap_sum(n_atoms, lo, hi, mu, parallel_sign=math.copysign(1.0, b1))


def cross_overlap(n_atoms: int, n: int, k: int, mu: float) -> float:
    """Biorthogonality overlap <psi_n_perp|psi_k> = (2mu)^N N_k N_n_perp (N-k)! k! delta_kn."""
    _check_index(n_atoms, n, "n")
    _check_index(n_atoms, k)
    if mu <= MU_SINGULAR:
        raise SingularParameterError(
            f"cross overlaps are singular for mu <= {MU_SINGULAR}, got {mu!r}"
        )
    if n != k:
        return 0.0
    log_val = (
        n_atoms * math.log(2.0 * mu)
        + _log_norm_k(n_atoms, k, mu)
        + _log_norm_perp(n_atoms, k, mu)
        + log_factorial(float(n_atoms - k))
        + log_factorial(float(k))
    )
    return math.exp(log_val)
