"""Exception types shared across the package."""


class GeonewtonError(Exception):
    """Base class for all library errors."""


class ContractError(GeonewtonError):
    """An argument violates a documented contract (mismatched base points,
    wrong dimensions, broken invariants)."""


class ConfigurationError(GeonewtonError):
    """Invalid pairing of components, e.g. a Cayley retraction on a sphere
    or a trace objective on a sphere point."""


class CutLocusError(GeonewtonError):
    """Logarithm requested at or beyond the cut locus."""


class InversionFailureError(GeonewtonError):
    """Retraction inversion found no solution in the injectivity region."""


class SingularHessianError(GeonewtonError):
    """Tangent-space Hessian failed the conditioning guard."""


class EvaluationError(GeonewtonError):
    """Objective returned a non-finite value during a finite-difference probe."""


class PreconditionError(GeonewtonError):
    """A measurement was invoked at a point that does not satisfy its
    precondition (e.g. a residual sweep anchored at a non-critical point)."""


class InsufficientDataError(GeonewtonError):
    """Not enough usable data points to fit the requested quantity."""
