"""Integration kernels for the master-equation engine.

The jump operator is tridiagonal in the Dicke basis, so one right-hand-side
evaluation is a handful of banded products, O(N^2) instead of O(N^3). Two
interchangeable backends compute identical results:

* a numba-jitted loop that integrates a whole chunk of RK4 steps per call
  (the default; the sweep budgets need it), and
* a vectorized numpy fallback used when numba is unavailable and for
  schedules that are not linear in time.

Both take mu(t) = clip(mu_c + mu_b * t, 0, 1) and chi(t) = chi_fac * mu(t),
which covers the linear and quench drive schemes exactly.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except Exception:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def banded_rhs(rho: np.ndarray, mu: float, chi: float, nu: float, gamma_c: float,
               lad: np.ndarray) -> np.ndarray:
    """Master-equation right-hand side via banded products (numpy backend).

    Valid for arbitrary (also non-Hermitian) input matrices; the adjoint
    products are computed honestly rather than assuming rho = rho^dag, which
    matters for stability (see package notes in lindblad.evolve).
    """
    m2 = mu * mu
    col = lad[:, None]
    row = lad[None, :]

    a = chi * rho  # a = L~ rho
    a[:-1] += col * rho[1:]
    a[1:] += m2 * col * rho[:-1]

    d = chi * a  # d = a L~^dag = L~ rho L~^dag
    d[:, :-1] += a[:, 1:] * row
    d[:, 1:] += m2 * a[:, :-1] * row

    b = chi * a  # b = L~^dag a = L~^dag L~ rho
    b[1:] += col * a[:-1]
    b[:-1] += m2 * col * a[1:]

    e = chi * rho  # e = rho L~^dag
    e[:, :-1] += rho[:, 1:] * row
    e[:, 1:] += m2 * rho[:, :-1] * row

    f = chi * e  # f = e L~ = rho L~^dag L~
    f[:, 1:] += e[:, :-1] * row
    f[:, :-1] += m2 * e[:, 1:] * row

    out = d - 0.5 * (b + f)
    if nu != 0.0:
        out += (-0.5j * nu) * (b - f)
    out *= gamma_c
    return out


@njit(cache=True)
def _rhs_jit(rho, mu, chi, nu, gamma_c, lad, a, b, e, f, out):  # pragma: no cover
    d = rho.shape[0]
    m2 = mu * mu
    for i in range(d):
        for j in range(d):
            v = chi * rho[i, j]
            if i < d - 1:
                v += lad[i] * rho[i + 1, j]
            if i > 0:
                v += m2 * lad[i - 1] * rho[i - 1, j]
            a[i, j] = v
            w = chi * rho[i, j]
            if j < d - 1:
                w += rho[i, j + 1] * lad[j]
            if j > 0:
                w += m2 * rho[i, j - 1] * lad[j - 1]
            e[i, j] = w
    for i in range(d):
        for j in range(d):
            v = chi * a[i, j]
            if j < d - 1:
                v += a[i, j + 1] * lad[j]
            if j > 0:
                v += m2 * a[i, j - 1] * lad[j - 1]
            out[i, j] = v
            w = chi * a[i, j]
            if i > 0:
                w += lad[i - 1] * a[i - 1, j]
            if i < d - 1:
                w += m2 * lad[i] * a[i + 1, j]
            b[i, j] = w
            u = chi * e[i, j]
            if j > 0:
                u += e[i, j - 1] * lad[j - 1]
            if j < d - 1:
                u += m2 * e[i, j + 1] * lad[j]
            f[i, j] = u
    for i in range(d):
        for j in range(d):
            v = out[i, j] - 0.5 * (b[i, j] + f[i, j])
            if nu != 0.0:
                v += -0.5j * nu * (b[i, j] - f[i, j])
            out[i, j] = gamma_c * v


@njit(cache=True)
def _run_chunk_jit(rho, t0, n_steps, dt, mu_c, mu_b, chi_fac, nu, gamma_c, lad):  # pragma: no cover
    d = rho.shape[0]
    a = np.empty((d, d), np.complex128)
    b = np.empty((d, d), np.complex128)
    e = np.empty((d, d), np.complex128)
    f = np.empty((d, d), np.complex128)
    k1 = np.empty((d, d), np.complex128)
    k2 = np.empty((d, d), np.complex128)
    k3 = np.empty((d, d), np.complex128)
    k4 = np.empty((d, d), np.complex128)
    tmp = np.empty((d, d), np.complex128)
    for s in range(n_steps):
        t = t0 + s * dt
        mu = min(max(mu_c + mu_b * t, 0.0), 1.0)
        _rhs_jit(rho, mu, chi_fac * mu, nu, gamma_c, lad, a, b, e, f, k1)
        mu = min(max(mu_c + mu_b * (t + 0.5 * dt), 0.0), 1.0)
        for i in range(d):
            for j in range(d):
                tmp[i, j] = rho[i, j] + 0.5 * dt * k1[i, j]
        _rhs_jit(tmp, mu, chi_fac * mu, nu, gamma_c, lad, a, b, e, f, k2)
        for i in range(d):
            for j in range(d):
                tmp[i, j] = rho[i, j] + 0.5 * dt * k2[i, j]
        _rhs_jit(tmp, mu, chi_fac * mu, nu, gamma_c, lad, a, b, e, f, k3)
        mu = min(max(mu_c + mu_b * (t + dt), 0.0), 1.0)
        for i in range(d):
            for j in range(d):
                tmp[i, j] = rho[i, j] + dt * k3[i, j]
        _rhs_jit(tmp, mu, chi_fac * mu, nu, gamma_c, lad, a, b, e, f, k4)
        c = dt / 6.0
        for i in range(d):
            for j in range(d):
                rho[i, j] += c * (k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])


def _run_chunk_numpy(rho, t0, n_steps, dt, mu_of_t, chi_fac, nu, gamma_c, lad):
    for s in range(n_steps):
        t = t0 + s * dt
        mu = mu_of_t(t)
        k1 = banded_rhs(rho, mu, chi_fac * mu, nu, gamma_c, lad)
        mu = mu_of_t(t + 0.5 * dt)
        k2 = banded_rhs(rho + (0.5 * dt) * k1, mu, chi_fac * mu, nu, gamma_c, lad)
        k3 = banded_rhs(rho + (0.5 * dt) * k2, mu, chi_fac * mu, nu, gamma_c, lad)
        mu = mu_of_t(t + dt)
        k4 = banded_rhs(rho + dt * k3, mu, chi_fac * mu, nu, gamma_c, lad)
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return rho


def run_chunk(rho, t0, n_steps, dt, linear_coeffs, mu_of_t, chi_fac, nu, gamma_c, lad,
              force_numpy: bool = False):
    """Advance `rho` in place by n_steps of RK4 starting at time t0.

    `linear_coeffs` is (mu_c, mu_b) when mu(t) is linear-in-t on the whole
    chunk (jit path); otherwise None and the numpy path evaluates `mu_of_t`
    at every substage.
    """
    if linear_coeffs is not None and HAVE_NUMBA and not force_numpy:
        mu_c, mu_b = linear_coeffs
        _run_chunk_jit(rho, t0, n_steps, dt, mu_c, mu_b, chi_fac, nu, gamma_c, lad)
        return rho
    if linear_coeffs is not None and mu_of_t is None:
        mu_c, mu_b = linear_coeffs
        mu_of_t = lambda t: min(max(mu_c + mu_b * t, 0.0), 1.0)  # noqa: E731
    return _run_chunk_numpy(rho, t0, n_steps, dt, mu_of_t, chi_fac, nu, gamma_c, lad)
