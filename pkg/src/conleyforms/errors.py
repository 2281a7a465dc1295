"""Exception hierarchy shared by every module of the package."""


class ConleyFormsError(Exception):
    """Base class for all package errors."""


class ValidationError(ConleyFormsError):
    """Input is well-formed but violates a structural precondition."""


class ComputeError(ConleyFormsError):
    """A computation produced an inconsistent result."""


class ParseError(ConleyFormsError):
    """An input file could not be parsed against its schema."""


# order_core
class DuplicateLabel(ValidationError):
    pass


class CycleDetected(ValidationError):
    pass


class NotAPartialOrder(ValidationError):
    pass


class NotDistributive(ValidationError):
    pass


class NotAHomomorphism(ValidationError):
    pass


class SizeLimitExceeded(ValidationError):
    pass


# conley_forms
class AxiomsViolated(ValidationError):
    pass


class NotWellDefined(ComputeError):
    pass


class NotInjective(ComputeError):
    pass


class AdditivityNotApplicable(ValidationError):
    pass


class ThetaIllDefined(ComputeError):
    pass


# combi_dynamics
class NotAnAttractor(ValidationError):
    pass


class NotForwardInvariant(ValidationError):
    pass


class NotBackwardInvariant(ValidationError):
    pass


class NotASublattice(ValidationError):
    pass


class InvalidMorseRepresentation(ValidationError):
    pass


# regular_closed / model_pipeline
class GridMismatch(ValidationError):
    pass


class OutOfDomain(ValidationError):
    pass


class NotEnclosable(ComputeError):
    pass


class EmbeddingFailure(ComputeError):
    pass
