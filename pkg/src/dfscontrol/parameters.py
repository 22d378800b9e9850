"""Map laboratory cavity-QED parameters onto the effective drive model.

The effective model keeps only four numbers: the collective emission rate
gamma_c = 2 kappa S1^2 / (Delta_c^2 + kappa^2) with S1 = g|Omega_1|/(2|Delta_l|)
and S2 = g|Omega_2|/(2|Delta_r|), plus the ratios mu = sqrt(S2/S1),
chi = eta/S1 and nu = Delta_c/kappa. Laser/drive phases never enter: the
rotating-frame choice absorbs them, so only magnitudes are accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .eigenstructure import JumpParams

#: how much larger the fast scale must be for a regime inequality to "pass".
#: Advisory only; the effective model is simulated regardless.
REGIME_FACTOR = 10.0


@dataclass(frozen=True)
class PhysicalParams:
    """Laboratory parameters, all in one consistent angular-frequency unit."""

    g: float
    omega_1_abs: float
    omega_2_abs: float
    delta_l: float
    delta_r: float
    kappa: float
    delta_c: float
    eta: float
    n_atoms: int
    delta_up: float = 0.0
    delta_d: float = 0.0

    def __post_init__(self):
        if not self.kappa > 0.0:
            raise ValueError(f"kappa must be positive, got {self.kappa!r}")
        if self.delta_l == 0.0:
            raise ValueError("delta_l must be nonzero")
        if self.delta_r == 0.0 and self.omega_2_abs != 0.0:
            raise ValueError("delta_r must be nonzero unless Omega_2 = 0")
        if self.omega_1_abs < 0.0 or self.omega_2_abs < 0.0:
            raise ValueError("Rabi magnitudes must be >= 0")
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be a positive integer")
        # The frame choice behind the effective model sets these to zero;
        # nonzero values have no representation downstream.
        if self.delta_up != 0.0 or self.delta_d != 0.0:
            raise ValueError("delta_up and delta_d must be zero in this model")

    @classmethod
    def from_dict(cls, raw: dict) -> "PhysicalParams":
        """Build from the JSON `physical` block used by the CLI configs."""
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown physical parameters: {sorted(unknown)}")
        return cls(**raw)

    @property
    def s1(self) -> float:
        return self.g * self.omega_1_abs / (2.0 * abs(self.delta_l))

    @property
    def s2(self) -> float:
        if self.omega_2_abs == 0.0:
            return 0.0
        return self.g * self.omega_2_abs / (2.0 * abs(self.delta_r))


def effective_params(p: PhysicalParams) -> JumpParams:
    """Reduce laboratory parameters to the effective (gamma_c, mu, chi, nu)."""
    s1 = p.s1
    if s1 <= 0.0:
        raise ValueError("S1 = g|Omega_1|/(2|delta_l|) must be positive "
                         "(mu and chi are undefined otherwise)")
    gamma_c = 2.0 * p.kappa * s1**2 / (p.delta_c**2 + p.kappa**2)
    return JumpParams(
        mu=math.sqrt(p.s2 / s1),
        chi=p.eta / s1,
        gamma_c=gamma_c,
        nu=p.delta_c / p.kappa,
    )


@dataclass(frozen=True)
class ValidityCheck:
    condition: str
    ratio: float
    passed: bool


def _check(name: str, fast: float, slow: float) -> ValidityCheck:
    ratio = math.inf if slow == 0.0 else fast / slow
    return ValidityCheck(name, ratio, ratio >= REGIME_FACTOR)


def validity_report(p: PhysicalParams) -> list[ValidityCheck]:
    """Report each regime inequality with its raw ratio.

    Bad-cavity elimination needs kappa to dominate the collectively enhanced
    couplings; the excited-state elimination needs both detunings to dominate
    the Rabi frequencies and sqrt(N) g. A check passes when the ratio is at
    least REGIME_FACTOR; zero drives give an infinite-ratio (vacuous) pass.
    This never blocks a simulation.
    """
    root_n = math.sqrt(p.n_atoms)
    checks = [
        _check("kappa >> sqrt(N)*eta", p.kappa, root_n * abs(p.eta)),
        _check("kappa >> sqrt(N)*S1", p.kappa, root_n * p.s1),
        _check("kappa >> sqrt(N)*S2", p.kappa, root_n * p.s2),
    ]
    detunings = [("|delta_l|", abs(p.delta_l))]
    if p.omega_2_abs != 0.0:  # with Omega_2 off, the r manifold is never addressed
        detunings.append(("|delta_r|", abs(p.delta_r)))
    for label, detuning in detunings:
        checks.append(_check(f"{label} >> Omega_1", detuning, p.omega_1_abs))
        checks.append(_check(f"{label} >> Omega_2", detuning, p.omega_2_abs))
        checks.append(_check(f"{label} >> sqrt(N)*g", detuning, root_n * p.g))
    return checks
