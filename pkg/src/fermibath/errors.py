"""Exception hierarchy shared by all modules."""


class FermibathError(Exception):
    pass


class DomainError(FermibathError, ValueError):
    """Input outside the mathematical domain (non-positive temperature, T_c > T_e, ...)."""


class ConfigurationError(FermibathError, ValueError):
    """Numerical settings that cannot deliver the requested accuracy."""


class StructuralError(FermibathError, ValueError):
    """Shape or algebraic-structure mismatch."""


class NumericalInstabilityError(FermibathError, RuntimeError):
    pass


class ConvergenceError(FermibathError, RuntimeError):
    pass


class TruncationError(NumericalInstabilityError):
    """Bosonic Fock-space cut-off visibly populated."""
