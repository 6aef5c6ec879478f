"""Explicit Runge-Kutta integration with CFL step selection."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument, NonConvergence, SimulationAbort
from .physics import pressure


class RKScheme(str, enum.Enum):
    RK4 = "rk4"
    SSP33 = "ssp33"


@dataclass(frozen=True)
class IntegratorConfig:
    """Settings for :func:`integrate`.

    ``dt`` fixes the step size and bypasses the CFL rule. With
    ``abort_on_inadmissible`` an inadmissible stage ends the run and is
    reported in the result; otherwise the :class:`SimulationAbort` propagates.
    ``diagnostics_every`` records diagnostics every that many steps (0 turns
    them off; the initial and final states are always recorded when on).
    """

    scheme: RKScheme = RKScheme.RK4
    cfl: float = 0.1
    t_end: float = 1.0
    max_steps: int = 10_000_000
    abort_on_inadmissible: bool = True
    dt: float | None = None
    diagnostics_every: int = 0

    def __post_init__(self):
        object.__setattr__(self, "scheme", RKScheme(self.scheme))
        if not 0.0 < self.cfl <= 2.0:
            raise InvalidArgument("cfl must lie in (0, 2]")
        if not self.t_end > 0.0:
            raise InvalidArgument("t_end must be positive")
        if self.dt is not None and not self.dt > 0.0:
            raise InvalidArgument("dt must be positive")
        if self.max_steps < 1:
            raise InvalidArgument("max_steps must be positive")


@dataclass
class IntegrationResult:
    u: np.ndarray
    t: float
    steps: int
    abort: SimulationAbort | None = None
    diagnostics: list = field(default_factory=list)

    @property
    def crashed(self) -> bool:
        return self.abort is not None

    @property
    def final_time(self) -> float:
        """Time reached; the time of the failing stage for crashed runs."""
        return self.abort.time if self.abort is not None else self.t


_EPS = np.finfo(float).eps


def _rhs_of(semidisc):
    return semidisc.rhs if hasattr(semidisc, "rhs") else semidisc


def stable_dt(semidisc, u, cfl) -> float:
    """``cfl * h_min / ((2N - 1) * lambda_max)`` for the current state."""
    lam = semidisc.max_wave_speed(u)
    if not lam > 0:
        raise InvalidArgument("maximum wave speed must be positive")
    return cfl * semidisc.h_min / ((2 * semidisc.N - 1) * lam)


def rk4_increment(rhs, u, t, dt):
    """Classical RK4 update ``u_next - u``."""
    k1 = rhs(u, t)
    k2 = rhs(u + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = rhs(u + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = rhs(u + dt * k3, t + dt)
    return (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def ssp33_increment(rhs, u, t, dt):
    """Three-stage third-order SSP update in Shu-Osher form, as an increment."""
    k1 = rhs(u, t)
    k2 = rhs(u + dt * k1, t + dt)
    k3 = rhs(u + 0.25 * dt * (k1 + k2), t + 0.5 * dt)
    return (dt / 6.0) * (k1 + k2 + 4.0 * k3)


def rk4_step(rhs, u, t, dt):
    return u + rk4_increment(rhs, u, t, dt)


def ssp33_step(rhs, u, t, dt):
    return u + ssp33_increment(rhs, u, t, dt)


_INCREMENTS = {RKScheme.RK4: rk4_increment, RKScheme.SSP33: ssp33_increment}


def kinetic_energy(u, semidisc) -> float:
    """Norm-matrix quadrature of ``rho |v|^2 / 2`` over the mesh."""
    u = np.asarray(u, dtype=float)
    integrand = 0.5 * np.sum(u[1:-1] ** 2, axis=0) / u[0]
    return semidisc.integrate(integrand)


def dissipation_rate(times, energies) -> np.ndarray:
    """``-dE/dt`` by central differences (one-sided at the ends)."""
    times = np.asarray(times, dtype=float)
    energies = np.asarray(energies, dtype=float)
    if times.size < 2:
        return np.zeros_like(energies)
    return -np.gradient(energies, times)


def _diagnostics(semidisc, u, t, dt):
    row = {"t": t, "dt": dt, "E_kin": math.nan, "min_rho": math.nan, "min_p": math.nan}
    law = getattr(semidisc, "law", None)
    if law is not None and law.needs_admissibility:
        row["E_kin"] = kinetic_energy(u, semidisc)
        row["min_rho"] = float(np.min(u[0]))
        row["min_p"] = float(np.min(pressure(u)))
    return row


def integrate(semidisc, u0, config: IntegratorConfig, callback=None) -> IntegrationResult:
    """Advance ``u0`` to ``config.t_end``.

    ``semidisc`` is a :class:`~usbp_dg.semidisc.SemiDiscretization` or, when
    ``config.dt`` is given, any callable ``rhs(u, t)``. ``callback(t, u)`` is
    called after every accepted step.
    """
    rhs = _rhs_of(semidisc)
    increment = _INCREMENTS[config.scheme]
    u = np.array(u0, dtype=float)
    # The clock is summed with Kahan compensation: naive accumulation of tens
    # of thousands of steps drifts by ~1e-11, which shows up as a phase error
    # comparable to high-order spatial errors.
    t = 0.0
    t_carry = 0.0
    t_end = config.t_end
    steps = 0
    diags = []
    every = config.diagnostics_every
    if every:
        diags.append(_diagnostics(semidisc, u, t, 0.0))
    try:
        while (remaining := (t_end - t) + t_carry) > 4.0 * _EPS * t_end:
            if steps >= config.max_steps:
                raise NonConvergence(f"reached {steps} steps at t={t:.6g} < {t_end}")
            dt = config.dt if config.dt is not None else stable_dt(semidisc, u, config.cfl)
            if not (dt > 0 and math.isfinite(dt)):
                raise SimulationAbort(t, (), (), "finite")
            dt = min(dt, remaining)
            u = u + increment(rhs, u, t, dt)
            y = dt - t_carry
            t_new = t + y
            t_carry = (t_new - t) - y
            t = t_new
            steps += 1
            if callback is not None:
                callback(t, u)
            if every and (steps % every == 0):
                diags.append(_diagnostics(semidisc, u, t, dt))
        t = t_end
        if hasattr(semidisc, "check_state"):
            semidisc.check_state(u, t)
    except SimulationAbort as abort:
        if not config.abort_on_inadmissible:
            raise
        return IntegrationResult(u, t, steps, abort, diags)
    if every and (not diags or diags[-1]["t"] != t):
        diags.append(_diagnostics(semidisc, u, t, 0.0))
    return IntegrationResult(u, t, steps, None, diags)


def write_diagnostics_csv(path, diagnostics):
    """Write ``t, dt, E_kin, min_rho, min_p`` rows."""
    cols = ["t", "dt", "E_kin", "min_rho", "min_p"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for row in diagnostics:
            w.writerow([repr(float(row[c])) for c in cols])
