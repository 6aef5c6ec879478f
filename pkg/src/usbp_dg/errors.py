"""Exception types shared across the package."""

from __future__ import annotations


class InvalidArgument(ValueError):
    """An argument violates a documented precondition."""


class ConstructionFailure(RuntimeError):
    """A numerical construction did not satisfy its defining identities."""


class InadmissibleState(ValueError):
    """A state has nonpositive density or pressure, or is not finite."""


class MeshError(ValueError):
    """A mesh has a nonpositive mapping Jacobian somewhere."""


class NonConvergence(RuntimeError):
    """A time integration exceeded its step budget."""


class ConfigError(ValueError):
    """An experiment configuration is invalid."""


class SimulationAbort(RuntimeError):
    """Raised when a stage produces an inadmissible state.

    Attributes
    ----------
    time : float
        Simulation time at which the state was evaluated.
    element : tuple of int
        Element index (one entry per space dimension).
    node : tuple of int
        Node index inside the element.
    quantity : str
        Which check failed: ``"density"``, ``"pressure"`` or ``"finite"``.
    """

    def __init__(self, time, element, node, quantity, value=float("nan")):
        self.time = float(time)
        self.element = tuple(int(i) for i in element)
        self.node = tuple(int(i) for i in node)
        self.quantity = quantity
        self.value = float(value)
        super().__init__(
            f"inadmissible {quantity} ({self.value:.3e}) at t={self.time:.6g}, "
            f"element {self.element}, node {self.node}"
        )
