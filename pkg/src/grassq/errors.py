"""Exception hierarchy shared by the symbolic and numeric layers."""


class EngineError(Exception):
    """Base class for every error raised by this package."""


class LevelMismatchError(EngineError):
    """Two values built over different deformation levels were combined."""


class UnspecifiedRelationError(EngineError):
    """A reordering needs an exchange rule the algebra does not define.

    The defining relations cover same-kind generators at any pair of
    indices and mixed kinds at a common index only.  Anything else is
    refused instead of silently assigning a phase.
    """


class GramUnknownError(EngineError):
    """A composition needs a same-family overlap such as <psi_i|psi_j>.

    These overlaps are not fixed by biorthonormality; they only become
    computable once a concrete matrix realization is supplied.
    """


class DyadShapeError(EngineError):
    """Kets, bras and operators were composed in a meaningless order."""


class EtaUnexpressibleError(EngineError):
    """The metric action would leave the biorthonormal family pair.

    Conjugating with the metric relabels psi-kets to phi-kets and
    phi-bras to psi-bras; applying it to the opposite tags would need
    the square of the metric, which has no symbolic normal form here.
    """


class NonTerminatingSeriesError(EngineError):
    """An exponential series failed to vanish within the nilpotency bound."""


class SingularSystemError(EngineError):
    """An exact linear solve found no unique solution, or needed division
    by a non-invertible coefficient."""


class DecompositionError(EngineError):
    """A concrete matrix is outside the supported class."""


class ComplexSpectrumError(DecompositionError):
    """Eigenvalues have imaginary parts beyond tolerance."""


class DegenerateSpectrumError(DecompositionError):
    """Two eigenvalues are too close for the nondegenerate constructions."""


class DefectiveMatrixError(DecompositionError):
    """The matrix has no complete eigenbasis."""


class ProblemFormatError(EngineError):
    """A problem description file violates the input schema."""
