"""Exact-diagonalization and combinatorics toolkit for thermalization studies."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import (
    ConfigError,
    ConstructionError,
    DimensionError,
    EmptyWindow,
    InfeasibleSubspace,
    InsufficientSpectrum,
    InsufficientStructure,
    InvalidOperator,
    InvalidState,
    ResourceError,
    ThermolabError,
)

__all__ = [
    "BACKEND",
    "ConfigError",
    "ConstructionError",
    "DimensionError",
    "EmptyWindow",
    "InfeasibleSubspace",
    "InsufficientSpectrum",
    "InsufficientStructure",
    "InvalidOperator",
    "InvalidState",
    "ResourceError",
    "ThermolabError",
    "__version__",
]
