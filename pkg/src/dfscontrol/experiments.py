"""Configuration-driven experiment harness and figure-data reproduction.

Runs are described by plain JSON dicts (one run per file, with an optional
Cartesian `sweep` block), validated up front with field-level messages, and
emit deterministic CSV files plus a summary JSON that records the resolved
configuration and relative paths of every file it produced. Floats are
serialized with 17 significant digits so reruns are byte-identical.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial
from pathlib import Path

import numpy as np

from .adiabaticity import scan_xi, xi_kf
from .dicke import bloch_angle_grid, bloch_overlap_map
from .eigenstructure import JumpParams, eigenstate
from .errors import ConfigError, UnknownFigureError
from .lindblad import DensityMatrix, EvolveResult, IntegratorConfig, evolve
from .schedules import (
    Schedule,
    linear_schedule,
    optimize_q,
    piecewise_schedule,
    quench_schedule,
)

OUTPUT_DIR_ENV = "DFSCONTROL_OUTPUT_DIR"
SCHEMES = ("linear", "quench", "piecewise")
OUTPUT_KINDS = ("trajectory", "adiabaticity", "bloch_map", "summary")

TRAJECTORY_HEADER = ("t", "mu", "chi", "purity", "fidelity", "xi_k", "Xi_k")
XI_SCAN_HEADER = ("mu", "xi", "xi_over_xif", "branch")
QSCAN_HEADER = ("q", "q_over_N", "final_fidelity")
BLOCH_HEADER = ("theta", "phi", "overlap")


# ---------------------------------------------------------------------------
# serialization helpers

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if v == 0.0:
        v = 0.0  # canonicalize -0.0
    return format(v, ".17g")


def _atomic_write_text(path: Path, text: str) -> None:
    """Write via temp file + rename so partial runs never corrupt results."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    _atomic_write_text(path, "\n".join(lines) + "\n")


def write_summary(path: Path, summary: dict) -> None:
    _atomic_write_text(path, json.dumps(summary, indent=2, sort_keys=True) + "\n")


def default_output_dir(explicit: str | None = None) -> Path:
    if explicit:
        return Path(explicit)
    return Path(os.environ.get(OUTPUT_DIR_ENV, "results"))


# ---------------------------------------------------------------------------
# run configuration

@dataclass(frozen=True)
class RunConfig:
    """A single resolved trajectory run.

    Times are in 1/gamma_c. A `physical` block of laboratory parameters may
    replace the direct `nu`: gamma_c and nu are then derived through the
    effective-model mapping and the regime-validity report is attached to the
    run summary.
    """

    n_atoms: int
    k: int
    scheme: str
    t_f: float
    q: float | None = None
    nu: float = 0.0
    dt: float | None = None
    sample_every: int | None = None
    outputs: tuple[str, ...] = ("trajectory", "summary")
    breakpoints: tuple[tuple[float, float], ...] | None = None
    bloch_theta_steps: int = 91
    bloch_phi_steps: int = 180
    convergence_check: bool = False
    label: str | None = None
    physical: dict | None = None

    def schedule(self) -> Schedule:
        if self.scheme == "linear":
            return linear_schedule(self.t_f, self.n_atoms, self.k)
        if self.scheme == "quench":
            return quench_schedule(self.t_f, self.n_atoms, self.k, self.q)
        return piecewise_schedule(self.n_atoms, self.k, self.breakpoints)

    def resolved_label(self) -> str:
        if self.label:
            return self.label
        parts = [f"N{self.n_atoms}", f"k{self.k}", self.scheme, f"tf{self.t_f:g}"]
        if self.scheme == "quench":
            parts.append(f"q{self.q:g}")
        if self.nu != 0.0:
            parts.append(f"nu{self.nu:g}")
        return "_".join(parts)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["label"] = self.resolved_label()
        return d


def _resolve_k(value, n_atoms: int):
    if value == "half":
        if n_atoms % 2:
            raise ValueError('k="half" needs an even atom number')
        return n_atoms // 2
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError('k must be an integer or "half"')
    return value


def _resolve_q(value, n_atoms: int):
    if value == "sqrtN":
        return math.sqrt(n_atoms)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValueError('q must be a number or "sqrtN"')
    return float(value)


_RUN_FIELDS = {
    "n_atoms", "k", "scheme", "t_f", "q", "nu", "dt", "sample_every",
    "outputs", "breakpoints", "bloch_theta_steps", "bloch_phi_steps",
    "convergence_check", "label", "physical",
}


def parse_run_config(raw: dict) -> RunConfig:
    """Validate one resolved (sweep-free) run dict, collecting field errors."""
    errors: dict[str, str] = {}
    for key in raw:
        if key not in _RUN_FIELDS:
            errors[key] = "unknown field"

    n_atoms = raw.get("n_atoms")
    if not isinstance(n_atoms, int) or isinstance(n_atoms, bool) or n_atoms < 1:
        errors["n_atoms"] = f"must be a positive integer, got {n_atoms!r}"
        n_atoms = None

    scheme = raw.get("scheme", "linear")
    if scheme not in SCHEMES:
        errors["scheme"] = f"must be one of {SCHEMES}, got {scheme!r}"

    k = None
    if n_atoms is not None:
        try:
            k = _resolve_k(raw.get("k", 0), n_atoms)
            if not 0 <= k <= n_atoms:
                raise ValueError(f"k must lie in [0, {n_atoms}], got {k}")
        except ValueError as exc:
            errors["k"] = str(exc)

    breakpoints = raw.get("breakpoints")
    t_f = raw.get("t_f")
    if scheme == "piecewise":
        if breakpoints is None:
            errors["breakpoints"] = "required for the piecewise scheme"
        else:
            try:
                breakpoints = tuple((float(t), float(m)) for t, m in breakpoints)
                t_f = breakpoints[-1][0]
            except (TypeError, ValueError):
                errors["breakpoints"] = "must be a list of (t, mu) pairs"
    else:
        if not isinstance(t_f, (int, float)) or isinstance(t_f, bool) or not t_f > 0:
            errors["t_f"] = f"must be a positive number, got {t_f!r}"

    q = None
    if scheme == "quench":
        if "q" not in raw:
            errors["q"] = "required for the quench scheme"
        elif n_atoms is not None:
            try:
                q = _resolve_q(raw["q"], n_atoms)
                if not 0.0 < q < n_atoms:
                    raise ValueError(
                        f"q must lie strictly in (0, N={n_atoms}), got {q!r}"
                    )
            except ValueError as exc:
                errors["q"] = str(exc)
    elif "q" in raw and raw["q"] is not None:
        errors["q"] = "only meaningful for the quench scheme"

    nu = raw.get("nu", 0.0)
    if not isinstance(nu, (int, float)) or isinstance(nu, bool):
        errors["nu"] = f"must be a number, got {nu!r}"

    dt = raw.get("dt")
    if dt is not None and (not isinstance(dt, (int, float)) or not dt > 0):
        errors["dt"] = f"must be a positive number, got {dt!r}"

    sample_every = raw.get("sample_every")
    if sample_every is not None and (not isinstance(sample_every, int) or sample_every < 1):
        errors["sample_every"] = f"must be a positive integer, got {sample_every!r}"

    outputs = raw.get("outputs", ["trajectory", "summary"])
    if isinstance(outputs, (list, tuple)) and all(isinstance(o, str) for o in outputs):
        bad = [o for o in outputs if o not in OUTPUT_KINDS]
        if bad:
            errors["outputs"] = f"unknown outputs {bad}; valid: {OUTPUT_KINDS}"
        outputs = tuple(outputs)
    else:
        errors["outputs"] = "must be a list of output names"
        outputs = ("trajectory", "summary")

    for steps_key in ("bloch_theta_steps", "bloch_phi_steps"):
        v = raw.get(steps_key, 91 if "theta" in steps_key else 180)
        if not isinstance(v, int) or v < 2:
            errors[steps_key] = f"must be an integer >= 2, got {v!r}"

    physical = raw.get("physical")
    if physical is not None:
        if not isinstance(physical, dict):
            errors["physical"] = "must be an object of laboratory parameters"
        else:
            if "nu" in raw:
                errors["nu"] = "give either nu or a physical block, not both"
            try:
                block = dict(physical)
                if n_atoms is not None:
                    block.setdefault("n_atoms", n_atoms)
                effective_params(PhysicalParams.from_dict(block))
                physical = block
            except (TypeError, ValueError) as exc:
                errors["physical"] = str(exc)

    if errors:
        raise ConfigError(errors)

    return RunConfig(
        n_atoms=n_atoms,
        k=k,
        scheme=scheme,
        t_f=float(t_f),
        q=q,
        nu=float(nu),
        dt=None if dt is None else float(dt),
        sample_every=sample_every,
        outputs=outputs,
        breakpoints=breakpoints if scheme == "piecewise" else None,
        bloch_theta_steps=raw.get("bloch_theta_steps", 91),
        bloch_phi_steps=raw.get("bloch_phi_steps", 180),
        convergence_check=bool(raw.get("convergence_check", False)),
        label=raw.get("label"),
        physical=physical,
    )


def expand_sweep(raw: dict) -> list[dict]:
    """Expand the optional `sweep` array into resolved per-run dicts.

    Each sweep entry is {"field": <name>, "values": [...]}; entries combine
    Cartesian-style in listed order (later fields vary fastest).
    """
    entries = raw.get("sweep", [])
    base = {key: value for key, value in raw.items() if key != "sweep"}
    if not entries:
        return [base]
    if not isinstance(entries, list):
        raise ConfigError({"sweep": "must be a list of {field, values} entries"})
    fields = []
    value_lists = []
    for idx, entry in enumerate(entries):
        if (
            not isinstance(entry, dict)
            or "field" not in entry
            or "values" not in entry
            or not isinstance(entry["values"], list)
            or not entry["values"]
        ):
            raise ConfigError({f"sweep[{idx}]": "must be {field: <name>, values: [..]}"})
        fields.append(entry["field"])
        value_lists.append(entry["values"])
    expanded = []
    for combo in itertools.product(*value_lists):
        d = dict(base)
        d.update(zip(fields, combo))
        if "label" in d and len(entries) > 0 and raw.get("label"):
            suffix = "_".join(f"{f}{v:g}" if isinstance(v, (int, float)) else f"{f}{v}"
                              for f, v in zip(fields, combo))
            d["label"] = f"{raw['label']}_{suffix}"
        expanded.append(d)
    return expanded


# ---------------------------------------------------------------------------
# runners

def trajectory_rows(result: EvolveResult):
    for s in result.samples:
        yield (s.t, s.mu, s.chi, s.purity, s.fidelity, s.xi_k, s.Xi_k)


def husimi_rows(rho: DensityMatrix, theta_steps: int, phi_steps: int):
    """Coherent-state overlap map of a density matrix, row-major in theta."""
    from .dicke import spin_coherent_state

    thetas, phis = bloch_angle_grid(theta_steps, phi_steps)
    for theta in thetas:
        for phi in phis:
            coh = spin_coherent_state(rho.n_atoms, float(theta), float(phi))
            val = float(np.real(coh.amplitudes.conj() @ rho.rho @ coh.amplitudes))
            yield (theta, phi, val)


def _base_params(run: RunConfig) -> JumpParams:
    if run.physical is not None:
        eff = effective_params(PhysicalParams.from_dict(run.physical))
        return JumpParams(mu=0.0, chi=0.0, gamma_c=eff.gamma_c, nu=eff.nu)
    return JumpParams(mu=0.0, chi=0.0, gamma_c=1.0, nu=run.nu)


def execute_run(run: RunConfig) -> EvolveResult:
    """Integrate one configured trajectory (no file output)."""
    schedule = run.schedule()
    config = IntegratorConfig(dt=run.dt, convergence_check=run.convergence_check)
    return evolve(
        DensityMatrix.ground(run.n_atoms), schedule, _base_params(run), config,
        sample_every=run.sample_every,
        record_adiabaticity="adiabaticity" in run.outputs,
    )


def execute_runs(runs: list[RunConfig], jobs: int = 1) -> list[EvolveResult]:
    """Integrate a batch of configured trajectories, in parallel when jobs > 1."""
    if jobs > 1 and len(runs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(execute_run, runs))
    return [execute_run(run) for run in runs]


def run_simulation(run: RunConfig, output_dir: Path | str) -> dict:
    """Integrate one configured trajectory and write its files.

    Returns the summary dict (also written as JSON when requested).
    """
    output_dir = Path(output_dir)
    start = time.perf_counter()
    result = execute_run(run)
    wall = time.perf_counter() - start

    label = run.resolved_label()
    files: dict[str, str] = {}
    if "trajectory" in run.outputs or "adiabaticity" in run.outputs:
        name = f"{label}_trajectory.csv"
        write_csv(output_dir / name, TRAJECTORY_HEADER, trajectory_rows(result))
        files["trajectory"] = name
    if "bloch_map" in run.outputs:
        name = f"{label}_bloch.csv"
        write_csv(
            output_dir / name, BLOCH_HEADER,
            husimi_rows(result.final, run.bloch_theta_steps, run.bloch_phi_steps),
        )
        files["bloch_map"] = name

    summary = {
        "label": label,
        "config": run.to_dict(),
        "final_fidelity": result.final_fidelity,
        "final_purity": result.final_purity,
        "dt_used": result.dt_used,
        "n_steps": result.n_steps,
        "convergence_flag": result.converged,
        "convergence_gap": result.convergence_gap,
        "max_trace_drift": result.max_trace_drift,
        "max_hermiticity_drift": result.max_herm_drift,
        "min_eigenvalue": result.min_eigenvalue,
        "wall_time_s": wall,
        "files": files,
    }
    if "summary" in run.outputs:
        write_summary(output_dir / f"{label}_summary.json", summary)
    return summary


def _simulate_worker(args: tuple[RunConfig, str]) -> dict:
    run, outdir = args
    return run_simulation(run, Path(outdir))


def run_simulations(runs: list[RunConfig], output_dir: Path | str, jobs: int = 1) -> list[dict]:
    """Run a batch of trajectories, in parallel when jobs > 1."""
    tasks = [(run, str(output_dir)) for run in runs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_simulate_worker, tasks))
    return [_simulate_worker(t) for t in tasks]


def _parse_grid(raw: dict, errors: dict, key_values: str, key_range: str,
                range_keys=("start", "stop", "num")) -> list[float] | None:
    if key_values in raw and key_range in raw:
        errors[key_values] = f"give either {key_values} or {key_range}, not both"
        return None
    if key_values in raw:
        vals = raw[key_values]
        if not isinstance(vals, list) or not vals:
            errors[key_values] = "must be a non-empty list of numbers"
            return None
        return [float(v) for v in vals]
    if key_range in raw:
        spec = raw[key_range]
        if not isinstance(spec, dict) or any(k not in spec for k in range_keys):
            errors[key_range] = f"must be an object with keys {range_keys}"
            return None
        if range_keys[-1] == "num":
            return list(np.linspace(spec["start"], spec["stop"], int(spec["num"])))
        n = int(round((spec["stop"] - spec["start"]) / spec["step"])) + 1
        return [spec["start"] + i * spec["step"] for i in range(n)]
    errors[key_values] = f"one of {key_values} or {key_range} is required"
    return None


def run_adiabaticity_scan(raw: dict, output_dir: Path | str) -> dict:
    """Scan xi_k over a mu grid and write `mu,xi,xi_over_xif,branch`."""
    output_dir = Path(output_dir)
    errors: dict[str, str] = {}
    n_atoms = raw.get("n_atoms")
    if not isinstance(n_atoms, int) or isinstance(n_atoms, bool) or n_atoms < 1:
        errors["n_atoms"] = f"must be a positive integer, got {n_atoms!r}"
    k = None
    if not errors:
        try:
            k = _resolve_k(raw.get("k", 0), n_atoms)
        except ValueError as exc:
            errors["k"] = str(exc)
    grid = _parse_grid(raw, errors, "mu_values", "mu_grid")
    if grid is not None and not errors:
        bad = [m for m in grid if m <= 0.0]
        if bad:
            errors["mu_values"] = f"mu values must be positive, got {bad[:3]}"
    if errors:
        raise ConfigError(errors)

    report = scan_xi(n_atoms, k, grid,
                     mu_dot=raw.get("mu_dot"), nu=raw.get("nu", 0.0))
    label = raw.get("label") or f"N{n_atoms}_k{k}_xi_scan"
    name = f"{label}.csv"
    rows = zip(report.mu_grid, report.xi, report.xi_ratio, report.branch)
    write_csv(output_dir / name, XI_SCAN_HEADER, rows)
    summary = {
        "label": label,
        "config": {"n_atoms": n_atoms, "k": k, "mu_grid": list(map(float, grid)),
                   "mu_dot": raw.get("mu_dot"), "nu": raw.get("nu", 0.0)},
        "xi_kf": xi_kf(n_atoms, k),
        "files": {"scan": name},
    }
    write_summary(output_dir / f"{label}_summary.json", summary)
    return summary


def run_bloch_map(raw: dict, output_dir: Path | str) -> dict:
    """Overlap map of the eigenstate |psi_k(mu)> on the collective sphere."""
    output_dir = Path(output_dir)
    errors: dict[str, str] = {}
    n_atoms = raw.get("n_atoms")
    if not isinstance(n_atoms, int) or isinstance(n_atoms, bool) or n_atoms < 1:
        errors["n_atoms"] = f"must be a positive integer, got {n_atoms!r}"
    k = None
    if not errors:
        try:
            k = _resolve_k(raw.get("k", 0), n_atoms)
        except ValueError as exc:
            errors["k"] = str(exc)
    mu = raw.get("mu", 1.0)
    if not isinstance(mu, (int, float)) or isinstance(mu, bool) or mu < 0:
        errors["mu"] = f"must be a number >= 0, got {mu!r}"
    theta_steps = raw.get("theta_steps", 91)
    phi_steps = raw.get("phi_steps", 180)
    for name, v in (("theta_steps", theta_steps), ("phi_steps", phi_steps)):
        if not isinstance(v, int) or v < 2:
            errors[name] = f"must be an integer >= 2, got {v!r}"
    if errors:
        raise ConfigError(errors)

    state = eigenstate(n_atoms, k, float(mu))
    grid = bloch_overlap_map(state, theta_steps, phi_steps)
    thetas, phis = bloch_angle_grid(theta_steps, phi_steps)
    rows = (
        (theta, phi, grid[it, ip])
        for it, theta in enumerate(thetas)
        for ip, phi in enumerate(phis)
    )
    label = raw.get("label") or f"N{n_atoms}_k{k}_mu{mu:g}_bloch"
    name = f"{label}.csv"
    write_csv(output_dir / name, BLOCH_HEADER, rows)
    summary = {
        "label": label,
        "config": {"n_atoms": n_atoms, "k": k, "mu": float(mu),
                   "theta_steps": theta_steps, "phi_steps": phi_steps},
        "files": {"bloch_map": name},
    }
    write_summary(output_dir / f"{label}_summary.json", summary)
    return summary


def quench_run_record(schedule: Schedule, nu: float = 0.0,
                      dt: float | None = None,
                      convergence_check: bool = False) -> tuple[float, dict]:
    """Rich q-scan runner: final fidelity plus conservation diagnostics."""
    result = evolve(
        DensityMatrix.ground(schedule.n_atoms),
        schedule,
        JumpParams(mu=0.0, chi=0.0, nu=nu),
        IntegratorConfig(dt=dt, convergence_check=convergence_check),
    )
    return result.final_fidelity, {
        "max_trace_drift": result.max_trace_drift,
        "max_herm_drift": result.max_herm_drift,
        "min_eigenvalue": result.min_eigenvalue,
        "converged": result.converged,
        "convergence_gap": result.convergence_gap,
    }


def quench_final_fidelity(schedule: Schedule, nu: float = 0.0,
                          dt: float | None = None,
                          convergence_check: bool = False) -> float:
    """Final fidelity of one quench trajectory from the collective ground state."""
    return quench_run_record(schedule, nu, dt, convergence_check)[0]


def run_optimize_q(raw: dict, output_dir: Path | str, jobs: int = 1) -> dict:
    """Grid scan of the quench strength; writes `q,q_over_N,final_fidelity`."""
    output_dir = Path(output_dir)
    errors: dict[str, str] = {}
    n_atoms = raw.get("n_atoms")
    if not isinstance(n_atoms, int) or isinstance(n_atoms, bool) or n_atoms < 1:
        errors["n_atoms"] = f"must be a positive integer, got {n_atoms!r}"
        raise ConfigError(errors)
    try:
        k = _resolve_k(raw.get("k", 0), n_atoms)
    except ValueError as exc:
        errors["k"] = str(exc)
    t_f = raw.get("t_f", 40.0)
    if not isinstance(t_f, (int, float)) or isinstance(t_f, bool) or not t_f > 0:
        errors["t_f"] = f"must be a positive number, got {t_f!r}"
    grid_over_n = _parse_grid(raw, errors, "q_over_n_values", "q_over_n",
                              range_keys=("start", "stop", "step"))
    if errors:
        raise ConfigError(errors)
    q_grid = [qn * n_atoms for qn in grid_over_n]

    runner = partial(
        quench_final_fidelity,
        nu=raw.get("nu", 0.0),
        dt=raw.get("dt"),
        convergence_check=bool(raw.get("convergence_check", False)),
    )
    scan = optimize_q(n_atoms, k, float(t_f), q_grid, runner, jobs=jobs)

    label = raw.get("label") or f"N{n_atoms}_k{k}_qscan"
    name = f"{label}.csv"
    rows = ((p.q, p.q / n_atoms, p.final_fidelity) for p in scan.points)
    write_csv(output_dir / name, QSCAN_HEADER, rows)
    summary = {
        "label": label,
        "config": {"n_atoms": n_atoms, "k": k, "t_f": float(t_f),
                   "q_over_n_values": [float(v) for v in grid_over_n],
                   "nu": raw.get("nu", 0.0), "dt": raw.get("dt")},
        "q_best": scan.q_best,
        "q_best_over_n": scan.q_best / n_atoms,
        "failed_points": [
            {"q": p.q, "error": p.error} for p in scan.points if p.error
        ],
        "files": {"qscan": name},
    }
    write_summary(output_dir / f"{label}_summary.json", summary)
    return summary


# ---------------------------------------------------------------------------
# figure bundles

FIGURE_IDS = (3, 4, 5, 6, 7, 8)


def figure_tasks(figure_id: int) -> dict:
    """Canonical configurations reproducing each figure's dataset.

    k = N/2 entries exist only for even N; quench entries respect 0 < q < N
    (which drops the smallest atom numbers from the figure-7 panels).
    """
    if figure_id == 3:
        return {"bloch": [
            {"n_atoms": 20, "k": k, "mu": 1.0, "theta_steps": 121, "phi_steps": 240,
             "label": f"fig3_N20_k{k}"}
            for k in (0, 1, 5, 10)
        ]}
    if figure_id == 4:
        return {"runs": [
            {"n_atoms": 20, "k": 0, "scheme": "linear", "t_f": t_f, "nu": 0.0,
             "label": f"fig4_N20_k0_tf{t_f:g}"}
            for t_f in (20.0, 40.0, 80.0)
        ]}
    if figure_id == 5:
        runs = [
            {"n_atoms": n, "k": 0, "scheme": "linear", "t_f": 40.0, "nu": 0.0,
             "label": f"fig5_N{n}_k0"}
            for n in (1, 2, 10, 20, 40, 80)
        ]
        runs += [
            {"n_atoms": n, "k": "half", "scheme": "linear", "t_f": 40.0, "nu": 0.0,
             "label": f"fig5_N{n}_khalf"}
            for n in (2, 10, 20, 40, 80)
        ]
        return {"runs": runs}
    if figure_id == 6:
        scans = [
            {"n_atoms": n, "k": 0, "mu_grid": {"start": 0.002, "stop": 1.0, "num": 500},
             "label": f"fig6_N{n}_k0_xi"}
            for n in (1, 2, 10, 80)
        ]
        scans += [
            {"n_atoms": n, "k": "half", "mu_grid": {"start": 0.002, "stop": 1.0, "num": 500},
             "label": f"fig6_N{n}_khalf_xi"}
            for n in (2, 10, 80)
        ]
        return {"scans": scans}
    if figure_id == 7:
        runs = [
            {"n_atoms": n, "k": 0, "scheme": "quench", "t_f": 40.0, "q": "sqrtN",
             "nu": 0.0, "label": f"fig7_N{n}_k0_qsqrtN"}
            for n in (2, 10, 20, 40, 80)
        ]
        runs += [
            {"n_atoms": n, "k": "half", "scheme": "quench", "t_f": 40.0, "q": 2.0,
             "nu": 0.0, "label": f"fig7_N{n}_khalf_q2"}
            for n in (10, 20, 40, 80)
        ]
        return {"runs": runs}
    if figure_id == 8:
        return {"qscans": [
            {"n_atoms": n, "k": 0, "t_f": 40.0,
             "q_over_n": {"start": 0.01, "stop": 0.60, "step": 0.01},
             "label": f"fig8_N{n}_k0_qscan"}
            for n in (10, 20, 40)
        ]}
    raise UnknownFigureError(f"no bundled configuration for figure {figure_id!r}; "
                             f"known ids: {FIGURE_IDS}")


def reproduce_figure(figure_id: int, output_dir: Path | str, jobs: int = 1,
                     dt: float | None = None) -> list[dict]:
    """Emit the full dataset behind one figure into output_dir/fig<id>/."""
    tasks = figure_tasks(figure_id)
    outdir = Path(output_dir) / f"fig{figure_id}"
    summaries: list[dict] = []
    for raw in tasks.get("bloch", []):
        summaries.append(run_bloch_map(raw, outdir))
    for raw in tasks.get("scans", []):
        summaries.append(run_adiabaticity_scan(raw, outdir))
    run_dicts = tasks.get("runs", [])
    if run_dicts:
        runs = []
        for raw in run_dicts:
            if dt is not None:
                raw = {**raw, "dt": dt}
            runs.append(parse_run_config(raw))
        summaries.extend(run_simulations(runs, outdir, jobs=jobs))
    for raw in tasks.get("qscans", []):
        if dt is not None:
            raw = {**raw, "dt": dt}
        summaries.append(run_optimize_q(raw, outdir, jobs=jobs))
    return summaries
