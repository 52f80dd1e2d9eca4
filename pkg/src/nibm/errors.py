"""Exception types shared across the library."""


class NibmError(Exception):
    """Base class for all library errors."""


class DomainError(NibmError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RegimeError(NibmError, ValueError):
    """Operation requested in the wrong phase regime (sub/critical/super)."""


class CutAmbiguityError(NibmError, ValueError):
    """Evaluation on a branch cut without a side flag."""


class PoleProximityError(NibmError, ValueError):
    """Evaluation point too close to a lattice pole."""


class RankError(NibmError, ValueError):
    """Requested polynomial degree exceeds what the lattice resolves."""


class SolverError(NibmError, RuntimeError):
    """Iterative solver failed to converge."""


class QuadratureError(NibmError, RuntimeError):
    """Quadrature failed its self-consistency (doubling) check."""


class StateSpaceError(NibmError, ValueError):
    """Exact enumeration would exceed the configured state-space bounds."""
