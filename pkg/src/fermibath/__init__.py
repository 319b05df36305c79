"""Open-system dynamics of a single mode between an emitter and a collector bath."""
from .analytics import (TransportParams, current_closed_form, occupation_closed_form,
                        steady_current, steady_energy_loss)
from .errors import (ConfigurationError, ConvergenceError, DomainError, FermibathError,
                     NumericalInstabilityError, StructuralError, TruncationError)
from .lindblad import GeneratorSpec, Variant, propagate, steady_state
from .reservoirs import Statistics, bose_occupation, fermi_occupation, thermal_ratio

__version__ = "0.1.0"

__all__ = [
    "TransportParams", "current_closed_form", "occupation_closed_form", "steady_current",
    "steady_energy_loss", "ConfigurationError", "ConvergenceError", "DomainError",
    "FermibathError", "NumericalInstabilityError", "StructuralError", "TruncationError",
    "GeneratorSpec", "Variant", "propagate", "steady_state", "Statistics",
    "bose_occupation", "fermi_occupation", "thermal_ratio",
]
