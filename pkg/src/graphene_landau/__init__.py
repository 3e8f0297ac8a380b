"""Graphene Landau levels, canonical thermodynamics and superstatistics."""
from .core import (
    Band,
    DerivedParams,
    PhysicalParams,
    SpectrumLevel,
    Units,
    derive_params,
    hermite,
    landau_energy,
    landau_spectrum,
    spinor,
    susy_potentials,
    wavefunction,
)
from .errors import ComputationError, LandauError, ValidationError

__version__ = "0.1.0"
