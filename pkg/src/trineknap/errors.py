"""Exception hierarchy shared by the solver modules."""


class TrineError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(TrineError, ValueError):
    """Objective or instance parameters violate a stated constraint."""


class DomainError(TrineError, ValueError):
    """A point lies outside the domain an operation accepts."""


class OracleError(TrineError):
    """An objective oracle failed to evaluate inside its domain."""


class AssumptionViolation(TrineError):
    """The objective does not behave like an antisymmetric sigmoid."""


class DegenerateAnchorError(TrineError, ValueError):
    """Tangency anchor r coincides with the center c."""


class InfeasibleInstance(TrineError, ValueError):
    """The knapsack mass M lies outside [0, n]."""


class UndefinedGradient(TrineError, ValueError):
    """A k-space gradient was requested at a point with no interior value."""


class CapabilityError(TrineError):
    """A reference solver was asked for an instance it cannot handle."""


class ExpansionError(TrineError, ValueError):
    """A k-space point cannot be expanded into a concrete x-vector."""


class ConsistencyError(TrineError):
    """An internal invariant failed; usually a sign of a loose tolerance."""
