"""Exception hierarchy for cohcool.

CLI exit-code mapping: ScenarioError and InvalidParameter (and subclasses)
exit with 2, NumericalError with 3.
"""


class CohcoolError(Exception):
    """Base class for all package errors."""


class InvalidParameter(CohcoolError, ValueError):
    """A physical or configuration parameter is out of its allowed domain."""


class InvalidPolarization(InvalidParameter):
    """Polarization outside [-1, 1] (or outside the open interval where required)."""


class DivisionDomain(InvalidParameter):
    """A closed-form expression was evaluated where its denominator vanishes."""


class InvalidSubsystem(InvalidParameter):
    """Subsystem index out of range or dimension mismatch."""


class InvalidChannel(CohcoolError):
    """Kraus set fails trace preservation or complete positivity."""


class NumericalError(CohcoolError):
    """A numerical procedure failed to converge or produced an ill-defined result."""


class NonUniqueFixedPoint(NumericalError):
    """The map's unit eigenvalue is degenerate: no unique stationary state."""


class ScenarioError(CohcoolError):
    """Malformed scenario file or unknown/missing scenario keys."""
