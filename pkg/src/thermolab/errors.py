"""Exception hierarchy shared by all thermolab modules."""


class ThermolabError(Exception):
    """Base class for library errors."""


class DimensionError(ThermolabError, ValueError):
    """Operands have incompatible Hilbert-space dimensions."""


class InvalidState(ThermolabError, ValueError):
    """Input is not a valid quantum state."""


class InvalidOperator(ThermolabError, ValueError):
    """Operator violates a required property such as Hermiticity."""


class ConfigError(ThermolabError, ValueError):
    """Parameters violate a documented contract."""


class EmptyWindow(ThermolabError, ValueError):
    """An energy window contains no eigenvalue."""


class InsufficientSpectrum(ThermolabError, ValueError):
    """Too few levels for spacing statistics."""


class InsufficientStructure(ThermolabError, ValueError):
    """A time series has too few local minima to fit."""


class InfeasibleSubspace(ThermolabError, ValueError):
    """Subspaces fail the dimension condition of the unbiased-basis theorem.

    The offending subspace labels are stored in ``subspaces``.
    """

    def __init__(self, subspaces, message=None):
        self.subspaces = list(subspaces)
        super().__init__(message or f"dimension condition violated for subspaces {self.subspaces}")


class ConstructionError(ThermolabError, RuntimeError):
    """A numerical construction did not reach its residual tolerance."""


class ResourceError(ThermolabError, MemoryError):
    """A run would exceed the configured memory budget."""
