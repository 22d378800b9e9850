"""Drive profiles mu(t), the matched dark-state drive chi(t), and q-scans.

Two schemes from the driving protocol plus a piecewise-linear generalization:

* linear: mu(t) = t / t_f, slope beta = 1/t_f;
* quench: mu jumps to C = 1 - q/N at t=0 and ramps with slope q/(t_f N),
  reaching exactly 1 at t_f;
* piecewise: monotone linear interpolation through explicit breakpoints.

chi always tracks -mu(t) (N - 2k) so the k-th eigenstate stays dark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .eigenstructure import _log_norm_k, chi_for_dark
from ._logdomain import log_factorial

SCHEDULE_KINDS = ("linear", "quench", "piecewise")


@dataclass(frozen=True)
class Schedule:
    """Time-dependent drive profile with target eigenstate index k."""

    kind: str
    n_atoms: int
    k: int
    t_f: float
    beta: float | None = None
    q: float | None = None
    breakpoints: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be a positive integer")
        if not 0 <= self.k <= self.n_atoms:
            raise ValueError(f"k must lie in [0, {self.n_atoms}], got {self.k}")
        if not self.t_f > 0.0:
            raise ValueError(f"t_f must be positive, got {self.t_f!r}")
        if self.kind == "quench" and self.q is None:
            raise ValueError("quench schedule requires q")
        if self.kind == "piecewise" and not self.breakpoints:
            raise ValueError("piecewise schedule requires breakpoints")

    def mu(self, t: float) -> float:
        if t < 0.0:
            return 0.0
        if self.kind == "linear":
            return 1.0 if t >= self.t_f else t / self.t_f
        if self.kind == "quench":
            if t >= self.t_f:
                return 1.0
            c = 1.0 - self.q / self.n_atoms
            return c + (self.q / (self.t_f * self.n_atoms)) * t
        pts = self.breakpoints
        if t >= pts[-1][0]:
            return pts[-1][1]
        if t <= pts[0][0]:
            return pts[0][1]
        for (t0, m0), (t1, m1) in zip(pts, pts[1:]):
            if t0 <= t <= t1:
                return m0 + (m1 - m0) * (t - t0) / (t1 - t0)
        raise AssertionError("unreachable")

    def chi(self, t: float) -> float:
        return chi_for_dark(self.n_atoms, self.k, self.mu(t))

    def mu_dot(self, t: float) -> float:
        """Ramp slope at time t (right-sided at kinks, 0 outside [0, t_f])."""
        if t < 0.0 or t > self.t_f:
            return 0.0
        if self.kind == "linear":
            return 1.0 / self.t_f
        if self.kind == "quench":
            return self.q / (self.t_f * self.n_atoms)
        pts = self.breakpoints
        for (t0, m0), (t1, m1) in zip(pts, pts[1:]):
            if t0 <= t < t1 or (t == pts[-1][0] and t1 == t):
                return (m1 - m0) / (t1 - t0)
        return 0.0

    def linear_coefficients(self) -> tuple[float, float] | None:
        """(mu_c, mu_b) with mu(t) = clip(mu_c + mu_b t, 0, 1) on [0, t_f],
        or None when the profile is not a single linear piece."""
        if self.kind == "linear":
            return (0.0, 1.0 / self.t_f)
        if self.kind == "quench":
            return (1.0 - self.q / self.n_atoms, self.q / (self.t_f * self.n_atoms))
        return None


def linear_schedule(t_f: float, n_atoms: int, k: int) -> Schedule:
    """mu ramps linearly from 0 to 1 over [0, t_f]."""
    if not t_f > 0.0:
        raise ValueError(f"t_f must be positive, got {t_f!r}")
    return Schedule("linear", n_atoms, k, t_f, beta=1.0 / t_f)


def quench_schedule(t_f: float, n_atoms: int, k: int, q: float) -> Schedule:
    """Quench to mu = 1 - q/N at t=0, then ramp with slope q/(t_f N) to 1."""
    if not 0.0 < q < n_atoms:
        raise ValueError(
            f"q must lie strictly in (0, N) so the quench point 1 - q/N stays "
            f"in (0, 1); got q={q!r} for N={n_atoms}"
        )
    return Schedule("quench", n_atoms, k, t_f, q=q)


def piecewise_schedule(
    n_atoms: int, k: int, breakpoints: Iterable[tuple[float, float]]
) -> Schedule:
    """Continuous piecewise-linear profile through (t, mu) breakpoints.

    Times must be strictly increasing starting at t >= 0 and mu must be
    nondecreasing (the drive schemes studied here never ramp back down).
    """
    pts = tuple((float(t), float(m)) for t, m in breakpoints)
    if len(pts) < 2:
        raise ValueError("need at least two breakpoints")
    if pts[0][0] < 0.0:
        raise ValueError("breakpoint times must start at t >= 0")
    for (t0, m0), (t1, m1) in zip(pts, pts[1:]):
        if not t1 > t0:
            raise ValueError("breakpoint times must be strictly increasing")
        if m1 < m0:
            raise ValueError("mu must be nondecreasing across breakpoints")
    return Schedule("piecewise", n_atoms, k, pts[-1][0], breakpoints=pts)


def chi_of(schedule: Schedule, t: float) -> float:
    """Dark-state drive chi(t) = -mu(t) (N - 2k) for the schedule's target."""
    return schedule.chi(t)


def quench_initial_fidelity(n_atoms: int, k: int, q: float) -> float:
    """Overlap fidelity right after the quench, |<psi_k(0)|psi_k(1-q/N)>|^2.

    The pre-quench state is the collective ground state, so this is
    N_k(C)^2 N! with C = 1 - q/N, evaluated in the log domain.
    """
    if not 0.0 < q < n_atoms:
        raise ValueError(f"q must lie strictly in (0, N), got q={q!r} for N={n_atoms}")
    c = 1.0 - q / n_atoms
    return math.exp(2.0 * _log_norm_k(n_atoms, k, c) + log_factorial(float(n_atoms)))


@dataclass(frozen=True)
class QScanPoint:
    q: float
    final_fidelity: float | None
    error: str | None = None
    payload: object = None  # extra per-run data a rich runner chose to return


@dataclass(frozen=True)
class QScanResult:
    n_atoms: int
    k: int
    t_f: float
    q_best: float
    points: tuple[QScanPoint, ...]


def _attempt_point(task: tuple[Callable[[Schedule], float], Schedule]):
    runner, schedule = task
    try:
        value = runner(schedule)
        if isinstance(value, tuple):  # rich runners return (fidelity, payload)
            fid, payload = value
            return float(fid), None, payload
        return float(value), None, None
    except Exception as exc:  # noqa: BLE001 - failed points are data here
        return None, f"{type(exc).__name__}: {exc}", None


def optimize_q(
    n_atoms: int,
    k: int,
    t_f: float,
    q_grid: Sequence[float],
    runner: Callable[[Schedule], float],
    jobs: int = 1,
) -> QScanResult:
    """Exhaustive scan of the quench strength q, maximizing final fidelity.

    `runner` integrates one trajectory for a quench schedule and returns its
    final fidelity (or a (fidelity, payload) pair; the payload is kept on the
    scan point). With jobs > 1 grid points run in separate processes (runner
    must then be picklable); results are merged deterministically by q, with
    ties broken toward smaller q. Failed grid points stay in the table
    carrying their error message.
    """
    qs = sorted(float(q) for q in q_grid)
    if not qs:
        raise ValueError("q_grid must not be empty")
    for q in qs:
        if not 0.0 < q < n_atoms:
            raise ValueError(f"grid point q={q!r} outside (0, N={n_atoms})")

    tasks = [(runner, quench_schedule(t_f, n_atoms, k, q)) for q in qs]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_attempt_point, tasks))
    else:
        outcomes = [_attempt_point(t) for t in tasks]
    points = tuple(
        QScanPoint(q=q, final_fidelity=fid, error=err, payload=payload)
        for q, (fid, err, payload) in zip(qs, outcomes)
    )
    best = None
    for p in points:
        if p.final_fidelity is None:
            continue
        if best is None or p.final_fidelity > best.final_fidelity:
            best = p
    if best is None:
        raise RuntimeError("every grid point failed; see point errors")
    return QScanResult(n_atoms, k, t_f, q_best=best.q, points=points)
