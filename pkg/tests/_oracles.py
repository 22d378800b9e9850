"""Shared brute-force oracles used by the module tests and the acceptance suite."""

import math

import numpy as np


def brute_force_amplitudes(n, index, mu, complementary=False):
    """Expand the defining Schwinger polynomial by direct float convolution.

    Eigenstates come from (mu b_up + b_dn)^(N-index) (-mu b_up + b_dn)^index,
    complementary states from (b_up + mu b_dn)^(N-index) (-b_up + mu b_dn)^index
    (their 1/(2 mu) prefactors cancel against the (2 mu)^N normalization).
    Returns the unnormalized Dicke amplitudes: the coefficient of
    b_up^i b_dn^(N-i) times sqrt(i! (N-i)!).
    """
    if complementary:
        first, second = (1.0, mu), (-1.0, mu)  # (up-coeff, down-coeff)
    else:
        first, second = (mu, 1.0), (-mu, 1.0)
    poly = np.array([1.0])  # coefficients in powers of b_up
    for coeff, reps in ((first, n - index), (second, index)):
        for _ in range(reps):
            new = np.zeros(len(poly) + 1)
            new[: len(poly)] += coeff[1] * poly
            new[1:] += coeff[0] * poly
            poly = new
    i = np.arange(n + 1)
    return poly * np.sqrt(
        [math.factorial(int(x)) * math.factorial(int(n - x)) for x in i]
    )


def normalize(v):
    return v / np.linalg.norm(v)
