"""Exception taxonomy.

Two branches: :class:`ValidationError` for bad or inconsistent inputs
(CLI exit code 2) and :class:`NumericalError` for computations that fail
beyond recovery on otherwise valid inputs (CLI exit code 3).
"""


class ZooSelectError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ZooSelectError):
    """Input data is malformed, inconsistent, or out of range."""


class NumericalError(ZooSelectError):
    """A numerical routine failed after exhausting its recovery options."""


class MalformedFile(ValidationError):
    """File is not a recognized feature-matrix or manifest format."""


class NonFiniteEntry(ValidationError):
    """A feature matrix contains NaN or Inf."""


class CountMismatch(ValidationError):
    """Probing-sample counts disagree where they must match."""


class DuplicateId(ValidationError):
    """A manifest lists the same checkpoint id twice."""


class EmptyZoo(ValidationError):
    """A manifest lists no checkpoints."""


class ZeroGram(ValidationError):
    """All features of a checkpoint are zero, so its Gram matrix vanishes."""


class DimensionMismatch(ValidationError):
    """Two covariance matrices do not describe the same checkpoints."""


class BudgetOutOfRange(ValidationError):
    """Selection budget K outside the meaningful range [1, n-1]."""


class TooLarge(ValidationError):
    """Brute-force enumeration would exceed its guard."""


class BadSchedule(ValidationError):
    """A nested probing schedule cannot be built from the given sizes."""


class ConfigError(ValidationError):
    """A benchmark configuration is invalid."""


class DegenerateLabels(ValidationError):
    """A class label has no training samples."""


class SingularConditioning(NumericalError):
    """A covariance block stayed non-positive-definite after jitter escalation."""
