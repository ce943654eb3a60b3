"""Exception hierarchy shared by all modules."""


class PHSError(Exception):
    """Base class for every error raised by :mod:`phs`."""


class DimensionMismatch(PHSError, ValueError):
    pass


class ZeroVector(PHSError, ValueError):
    """The vector has (numerically) zero norm and does not determine a ray."""


class CountExceedsDim(PHSError, ValueError):
    pass


class LengthExceedsDim(PHSError, ValueError):
    pass


class OrthogonalStates(PHSError, ValueError):
    """Phase alignment is undefined for orthogonal vectors."""


class EqualStates(PHSError, ValueError):
    pass


class ConvergenceFailure(PHSError, RuntimeError):
    pass


class NotCauchy(PHSError, ValueError):
    pass


class EmptyProbes(PHSError, ValueError):
    pass


class TailTooLong(PHSError, ValueError):
    pass
