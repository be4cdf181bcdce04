"""Shared exception types."""


class OptimaError(Exception):
    """Base class for all package-specific failures."""


class UnknownNameError(OptimaError, KeyError):
    """Requested catalog entry does not exist."""


class FormatError(OptimaError, ValueError):
    """Malformed input file or parameter string."""


class DegeneratePairError(OptimaError):
    """Two points (nearly) coincide under a singular potential."""


class DesignPreconditionError(OptimaError):
    """Configuration lacks the design strength a certificate requires."""


class MonotonicityError(OptimaError):
    """Potential kind does not have the derivative signs a certificate needs."""


class TruncationError(OptimaError):
    """Requested truncation radius cannot meet the accuracy target."""


class BudgetError(OptimaError):
    """Enumeration would exceed the configured vector budget."""


class InfeasibleStrategyError(OptimaError):
    """No valid auxiliary function found with the requested shape."""


class NormalizationError(OptimaError):
    """Auxiliary function fails a normalization precondition."""


class ClusterAmbiguityError(OptimaError):
    """Inner products cannot be resolved into clusters at this tolerance."""


class VerificationError(OptimaError):
    """A sign or feasibility condition failed exact/certified checking."""
