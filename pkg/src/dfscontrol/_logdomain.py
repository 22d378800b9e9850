"""Log-domain combinatorics shared by the analytic eigenstructure formulas.

Factorial-bearing sums are evaluated as log-magnitudes (plus explicit signs
where needed) so that atom numbers of a few hundred stay well inside float
range.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import gammaln


def log_factorial(n):
    """log(n!), vectorized over array input."""
    return gammaln(n + 1.0)


def log_binomial(n: int, k: int) -> float:
    """log C(n, k) for 0 <= k <= n."""
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def pow_log(base: float, power: float) -> float:
    """power * log(base) with the 0**0 = 1 convention (returns 0.0, not nan)."""
    if power == 0:
        return 0.0
    if base == 0.0:
        return -math.inf
    return power * math.log(base)


def pow_log_array(log_base: float, powers) -> np.ndarray:
    """powers * log_base elementwise with the 0**0 = 1 convention, i.e.
    0 * (-inf) evaluates to 0 rather than nan."""
    powers = np.asarray(powers, dtype=float)
    out = np.zeros_like(powers)
    nz = powers != 0
    out[nz] = powers[nz] * log_base
    return out


@lru_cache(maxsize=None)
def signed_poly_coeffs(n_plus: int, n_minus: int) -> tuple[int, ...]:
    """Integer coefficients of (1 + z)**n_plus * (1 - z)**n_minus.

    Exact integer convolution: the alternating signs never cost precision,
    which is what makes the Dicke-basis expansions of the jump-operator
    eigenvectors reproducible to machine accuracy at large atom number.
    """
    coeffs = [1]
    for _ in range(n_plus):
        coeffs = [
            (coeffs[i] if i < len(coeffs) else 0) + (coeffs[i - 1] if i > 0 else 0)
            for i in range(len(coeffs) + 1)
        ]
    for _ in range(n_minus):
        coeffs = [
            (coeffs[i] if i < len(coeffs) else 0) - (coeffs[i - 1] if i > 0 else 0)
            for i in range(len(coeffs) + 1)
        ]
    return tuple(coeffs)
