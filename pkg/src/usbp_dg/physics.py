"""Conservation laws, flux vector splittings and test-case data.

States are arrays whose first axis holds the conserved variables, so a
1D Euler field has shape ``(3, ...)`` and a 2D Euler field ``(4, ...)``.
Directional fluxes take a direction ``normal = (nx, ny)`` whose components
are scalars or arrays broadcastable to the trailing shape of the state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InadmissibleState, InvalidArgument

GAMMA = 1.4


# ---------------------------------------------------------------------------
# Euler state helpers


@dataclass(frozen=True)
class EulerState:
    """A single Euler state in conserved variables."""

    rho: float
    momentum: tuple
    total_energy: float

    @classmethod
    def from_primitive(cls, rho, velocity, p):
        velocity = tuple(float(v) for v in np.atleast_1d(velocity))
        kinetic = 0.5 * rho * sum(v * v for v in velocity)
        return cls(float(rho), tuple(rho * v for v in velocity), p / (GAMMA - 1.0) + kinetic)

    @classmethod
    def from_array(cls, u):
        u = np.asarray(u, dtype=float)
        return cls(float(u[0]), tuple(float(m) for m in u[1:-1]), float(u[-1]))

    @property
    def velocity(self):
        return tuple(m / self.rho for m in self.momentum)

    @property
    def pressure(self):
        kinetic = 0.5 * sum(m * m for m in self.momentum) / self.rho
        return (GAMMA - 1.0) * (self.total_energy - kinetic)

    @property
    def admissible(self):
        return self.rho > 0 and self.pressure > 0

    def as_array(self):
        return np.array([self.rho, *self.momentum, self.total_energy])


def pressure(u):
    u = np.asarray(u, dtype=float)
    kinetic = 0.5 * np.sum(u[1:-1] ** 2, axis=0) / u[0]
    return (GAMMA - 1.0) * (u[-1] - kinetic)


def sound_speed(u):
    return np.sqrt(GAMMA * pressure(u) / np.asarray(u)[0])


def primitive_to_conserved(rho, velocity, p):
    """Conserved variables from density, velocity components and pressure."""
    rho = np.asarray(rho, dtype=float)
    vel = [np.asarray(v, dtype=float) for v in velocity]
    kinetic = 0.5 * rho * sum(v * v for v in vel)
    parts = [rho] + [rho * v for v in vel] + [p / (GAMMA - 1.0) + kinetic]
    return np.stack(np.broadcast_arrays(*parts))


def conserved_to_primitive(u):
    """Return ``(rho, [v...], p)``."""
    u = np.asarray(u, dtype=float)
    return u[0], [m / u[0] for m in u[1:-1]], pressure(u)


def check_admissible(u):
    """Raise :class:`InadmissibleState` unless density and pressure are positive."""
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise InadmissibleState("state is not finite")
    if np.any(u[0] <= 0):
        raise InadmissibleState("nonpositive density")
    if np.any(pressure(u) <= 0):
        raise InadmissibleState("nonpositive pressure")


def euler_flux(u, normal=None):
    """Euler flux; 1D for three variables, directional 2D for four."""
    u = np.asarray(u, dtype=float)
    if u.shape[0] == 3:
        return kernels.euler_flux_1d(u)
    if u.shape[0] == 4:
        nx, ny = (1.0, 0.0) if normal is None else normal
        return kernels.euler_flux_2d(u, nx, ny)
    raise InvalidArgument("Euler states have 3 (1D) or 4 (2D) variables")


# ---------------------------------------------------------------------------
# Conservation laws


class ConservationLaw:
    """Flux, wave speed and admissibility of a hyperbolic system."""

    name = ""
    nvar = 1
    ndim = 1
    linear = False
    needs_admissibility = False

    def flux(self, u, normal=None):
        raise NotImplementedError

    def wave_speed(self, u, normal=None):
        """Pointwise bound on ``|eigenvalues|`` of the directional Jacobian."""
        raise NotImplementedError

    def max_wave_speed(self, u):
        return float(np.max(self.wave_speed(u)))

    def __repr__(self):
        return f"{type(self).__name__}()"


class Advection(ConservationLaw):
    """Scalar linear advection ``u_t + a u_x = 0``."""

    name = "advection"
    linear = True

    def __init__(self, speed=1.0):
        self.speed = float(speed)

    def flux(self, u, normal=None):
        return self.speed * np.asarray(u, dtype=float)

    def wave_speed(self, u, normal=None):
        return np.full(np.shape(u)[1:], abs(self.speed))


class Burgers(ConservationLaw):
    """Inviscid Burgers equation with flux ``u^2 / 2``."""

    name = "burgers"

    def flux(self, u, normal=None):
        u = np.asarray(u, dtype=float)
        return 0.5 * u * u

    def wave_speed(self, u, normal=None):
        return np.abs(np.asarray(u, dtype=float)[0])


class Euler1D(ConservationLaw):
    name = "euler1d"
    nvar = 3
    needs_admissibility = True

    def flux(self, u, normal=None):
        return kernels.euler_flux_1d(u)

    def wave_speed(self, u, normal=None):
        u = np.asarray(u, dtype=float)
        return np.abs(u[1] / u[0]) + sound_speed(u)


class Euler2D(ConservationLaw):
    name = "euler2d"
    nvar = 4
    ndim = 2
    needs_admissibility = True

    def flux(self, u, normal=None):
        nx, ny = (1.0, 0.0) if normal is None else normal
        return kernels.euler_flux_2d(u, nx, ny)

    def wave_speed(self, u, normal=None):
        u = np.asarray(u, dtype=float)
        v1, v2 = u[1] / u[0], u[2] / u[0]
        c = sound_speed(u)
        if normal is None:
            return np.sqrt(v1 * v1 + v2 * v2) + c
        nx, ny = normal
        return np.abs(nx * v1 + ny * v2) + c * np.sqrt(nx * nx + ny * ny)


# ---------------------------------------------------------------------------
# Flux vector splittings


class SplittingName(str, enum.Enum):
    LAX_FRIEDRICHS = "lax_friedrichs"
    STEGER_WARMING = "steger_warming"
    VAN_LEER_HAENEL = "van_leer_haenel"
    FULL_UPWIND = "full_upwind"


_ALIASES = {
    "lf": SplittingName.LAX_FRIEDRICHS,
    "lax-friedrichs": SplittingName.LAX_FRIEDRICHS,
    "laxfriedrichs": SplittingName.LAX_FRIEDRICHS,
    "sw": SplittingName.STEGER_WARMING,
    "steger-warming": SplittingName.STEGER_WARMING,
    "stegerwarming": SplittingName.STEGER_WARMING,
    "vlh": SplittingName.VAN_LEER_HAENEL,
    "van-leer-haenel": SplittingName.VAN_LEER_HAENEL,
    "vanleerhaenel": SplittingName.VAN_LEER_HAENEL,
    "full-upwind": SplittingName.FULL_UPWIND,
    "fullupwind": SplittingName.FULL_UPWIND,
    "upwind": SplittingName.FULL_UPWIND,
}


def parse_splitting_name(name) -> SplittingName:
    if isinstance(name, SplittingName):
        return name
    key = str(name).strip().lower()
    try:
        return SplittingName(key.replace("-", "_"))
    except ValueError:
        pass
    if key in _ALIASES:
        return _ALIASES[key]
    raise InvalidArgument(f"unknown flux splitting {name!r}")


@dataclass(frozen=True)
class FluxSplitting:
    """Named splitting ``f = f_plus + f_minus`` for a conservation law.

    ``metric_order`` is the polynomial degree of the split fluxes in the
    components of the direction vector. ``lambda_max`` is only used by the
    Lax-Friedrichs splitting.
    """

    name: SplittingName
    law: ConservationLaw
    metric_order: int
    lambda_max: float | None = None

    def split(self, u, normal=None, check=True):
        u = np.asarray(u, dtype=float)
        if check and self.law.needs_admissibility:
            check_admissible(u)
        if self.name is SplittingName.LAX_FRIEDRICHS:
            lam = self.lambda_max
            f = self.law.flux(u, normal)
            if normal is not None and self.law.ndim == 1:
                raise InvalidArgument("1D laws take no direction vector")
            return 0.5 * (f + lam * u), 0.5 * (f - lam * u)
        if self.name is SplittingName.FULL_UPWIND:
            f = self.law.flux(u, normal)
            return f, np.zeros_like(f)
        if self.name is SplittingName.STEGER_WARMING:
            return steger_warming(u, normal, check=False)
        if self.name is SplittingName.VAN_LEER_HAENEL:
            return van_leer_haenel(u, normal, check=False)
        raise AssertionError(self.name)

    def plus(self, u, normal=None):
        return self.split(u, normal)[0]

    def minus(self, u, normal=None):
        return self.split(u, normal)[1]

    def flux(self, u, normal=None):
        return self.law.flux(u, normal)

    def with_lambda(self, lambda_max) -> "FluxSplitting":
        return FluxSplitting(self.name, self.law, self.metric_order, float(lambda_max))


def lax_friedrichs_splitting(law: ConservationLaw, lambda_max: float) -> FluxSplitting:
    """``f_pm = (f +- lambda_max u) / 2``; upwind if ``lambda_max`` bounds the wave speed."""
    if not lambda_max > 0:
        raise InvalidArgument("lambda_max must be positive")
    return FluxSplitting(SplittingName.LAX_FRIEDRICHS, law, 1, float(lambda_max))


def advection_splitting(lambda_max: float, speed: float = 1.0) -> FluxSplitting:
    """Lax-Friedrichs splitting of linear advection.

    With ``lambda_max == speed > 0`` this is pure upwinding: ``f_plus = u``
    times the speed and ``f_minus = 0``.
    """
    return lax_friedrichs_splitting(Advection(speed), lambda_max)


def burgers_full_upwind() -> FluxSplitting:
    """Burgers splitting with ``f_plus = u^2/2`` and ``f_minus = 0``."""
    return FluxSplitting(SplittingName.FULL_UPWIND, Burgers(), 1)


def _law_for(u):
    nvar = np.shape(u)[0]
    if nvar == 3:
        return 1
    if nvar == 4:
        return 2
    raise InvalidArgument("Euler states have 3 (1D) or 4 (2D) variables")


def steger_warming(u, normal=None, check=True):
    """Steger-Warming splitting of the Euler flux.

    In 2D the direction vector is normalised, the splitting is applied in the
    unit direction, and both parts are scaled by the vector's length.
    """
    if check:
        check_admissible(u)
    if _law_for(u) == 1:
        return kernels.steger_warming_1d(u)
    nx, ny = (1.0, 0.0) if normal is None else normal
    return kernels.steger_warming_2d(u, nx, ny)


def van_leer_haenel(u, normal=None, check=True):
    """Van Leer Mach-number splitting with enthalpy-based energy flux.

    The pressure is split as ``p (1 +- gamma M) / 2`` for ``|M| < 1``; the
    flux is fully one-sided for ``|M| >= 1``. In 2D the direction vector
    enters unnormalised, so the split fluxes are quadratic in its components.
    """
    if check:
        check_admissible(u)
    if _law_for(u) == 1:
        return kernels.van_leer_haenel_1d(u)
    nx, ny = (1.0, 0.0) if normal is None else normal
    return kernels.van_leer_haenel_2d(u, nx, ny)


def make_splitting(name, law: ConservationLaw, lambda_max=None) -> FluxSplitting:
    """Build a splitting by name for ``law``."""
    name = parse_splitting_name(name)
    if name is SplittingName.LAX_FRIEDRICHS:
        if lambda_max is None:
            raise InvalidArgument("Lax-Friedrichs needs lambda_max")
        return lax_friedrichs_splitting(law, lambda_max)
    if name is SplittingName.FULL_UPWIND:
        if not isinstance(law, Burgers):
            raise InvalidArgument("full upwind splitting is defined for Burgers")
        return burgers_full_upwind()
    if not isinstance(law, (Euler1D, Euler2D)):
        raise InvalidArgument(f"{name.value} splitting needs the Euler equations")
    return FluxSplitting(name, law, 2)


def lax_friedrichs_bound(u, law: ConservationLaw, safety: float = 1.2) -> float:
    """Global Lax-Friedrichs coefficient from a state: ``safety * max wave speed``."""
    return safety * law.max_wave_speed(u)


# ---------------------------------------------------------------------------
# Manufactured solution for 1D Euler on [0, 2]


def _mms_h(t, x):
    arg = np.pi * (np.asarray(x, dtype=float) - t)
    return 2.0 + 0.1 * np.sin(arg), 0.1 * np.pi * np.cos(arg)


def manufactured_euler_exact(t, x):
    """Conserved variables ``(h, h, h^2)`` with ``h = 2 + sin(pi (x - t)) / 10``."""
    h, _ = _mms_h(t, x)
    return np.stack([h, h, h * h])


def manufactured_euler_source(t, x):
    """Source making :func:`manufactured_euler_exact` an exact solution.

    Density and velocity are transported unchanged, so only the pressure
    gradient ``p_x = (gamma - 1)(2h - 1/2) h_x`` remains in the momentum and
    energy equations.
    """
    h, hx = _mms_h(t, x)
    px = (GAMMA - 1.0) * (2.0 * h - 0.5) * hx
    return np.stack([np.zeros_like(h), px, px])


# ---------------------------------------------------------------------------
# Initial conditions


class InitialCase(str, enum.Enum):
    ADVECTION_SINE = "advection_sine"
    ISENTROPIC_VORTEX = "isentropic_vortex"
    KELVIN_HELMHOLTZ = "kelvin_helmholtz"
    FREE_STREAM = "free_stream"
    RANDOM_NONNEGATIVE = "random_nonnegative"


FREE_STREAM_STATE = (1.0, 0.1, -0.2, 10.0)

VORTEX_STRENGTH = 10.0
VORTEX_BACKGROUND = (1.0, (1.0, 1.0), 10.0)
VORTEX_DOMAIN = (-5.0, 5.0)
KH_DOMAIN = (-1.0, 1.0)


def advection_sine(x):
    return np.sin(np.pi * np.asarray(x, dtype=float))[None]


def isentropic_vortex(x, y, t=0.0, strength=VORTEX_STRENGTH, domain=VORTEX_DOMAIN):
    """Isentropic vortex translated with the background velocity.

    The vortex centre starts at the origin; positions are wrapped into the
    periodic box so the exact solution is available at any time.
    """
    rho0, (vx, vy), p0 = VORTEX_BACKGROUND
    lo, hi = domain
    L = hi - lo
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dx = (x - vx * t - lo) % L + lo
    dy = (y - vy * t - lo) % L + lo
    r2 = dx * dx + dy * dy
    T0 = p0 / rho0
    T = T0 - (GAMMA - 1.0) * strength**2 / (8.0 * GAMMA * np.pi**2) * np.exp(1.0 - r2)
    rho = rho0 * (T / T0) ** (1.0 / (GAMMA - 1.0))
    amp = strength / (2.0 * np.pi) * np.exp(0.5 * (1.0 - r2))
    v1 = vx - amp * dy
    v2 = vy + amp * dx
    return primitive_to_conserved(rho, (v1, v2), rho * T)


def kelvin_helmholtz(x, y):
    """Shear layer with a smoothed density step and a sinusoidal perturbation."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    B = np.tanh(15.0 * y + 7.5) - np.tanh(15.0 * y - 7.5)
    rho = 0.5 + 0.75 * B
    v1 = 0.5 * (B - 1.0)
    v2 = 0.1 * np.sin(2.0 * np.pi * x)
    return primitive_to_conserved(rho, (v1, v2), np.ones_like(rho))


def free_stream(shape):
    """The constant state ``FREE_STREAM_STATE`` on a node array of ``shape``."""
    return np.broadcast_to(np.array(FREE_STREAM_STATE).reshape((4,) + (1,) * len(shape)),
                           (4,) + tuple(shape)).copy()


def random_nonnegative(shape, rng, low=0.1, high=1.1):
    """Scalar state ``(1, *shape)`` drawn uniformly from ``[low, high)``."""
    if low < 0 or not high > low:
        raise InvalidArgument("need 0 <= low < high")
    return rng.uniform(low, high, size=(1,) + tuple(shape))


def initial_conditions(case):
    """Return the state factory for ``case``."""
    case = InitialCase(case)
    return {
        InitialCase.ADVECTION_SINE: advection_sine,
        InitialCase.ISENTROPIC_VORTEX: isentropic_vortex,
        InitialCase.KELVIN_HELMHOLTZ: kelvin_helmholtz,
        InitialCase.FREE_STREAM: free_stream,
        InitialCase.RANDOM_NONNEGATIVE: random_nonnegative,
    }[case]
