"""Exception hierarchy shared across the toolkit.

The CLI maps these onto its exit-code taxonomy, so new exceptions should
subclass one of the branches below rather than ``Exception`` directly.
"""


class MgsError(Exception):
    """Base class for all toolkit errors."""


class DomainError(MgsError):
    """Input is outside the mathematical domain of an operation."""


class RangeError(DomainError):
    """A site, bond, or plane index is out of range."""


class DimensionError(DomainError):
    """Operands have incompatible dimensions."""


class NotInRingError(DomainError):
    """A matrix entry does not lie in the dyadic ring D[sqrt(2)]."""


class NotOrthogonalError(DomainError):
    """A matrix fails the (special) orthogonality check."""


class NotMatchgateError(DomainError):
    """A unitary does not act as a matchgate on the Majorana sector."""


class NotCovarianceError(DomainError):
    """A matrix is not a valid antisymmetric covariance (gamma^2 != -I)."""


class NormalizationError(DomainError):
    """A state vector is not normalized within tolerance."""


class ReflectionError(DomainError):
    """An orthogonal matrix has determinant -1 and cannot be decomposed."""


class CapError(DomainError):
    """A request exceeds the configured dense-simulation qubit cap."""


class CapacityError(MgsError):
    """An encoding would exceed the configured variable/clause budget."""


class SolverProcessError(MgsError):
    """An external solver exited without producing a verdict."""


class SolverParseError(MgsError):
    """External solver output could not be parsed."""


class SearchExhaustedError(MgsError):
    """Word search hit its length cap without reaching the target accuracy."""


class VerificationError(MgsError):
    """A decoded or synthesized circuit failed re-verification (bug trap)."""


class SynthesisError(MgsError):
    """Internal failure of the exact synthesizer (bug trap)."""
