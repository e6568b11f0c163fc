"""Exception hierarchy shared by all semispec modules."""


class SemispecError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(SemispecError, ValueError):
    pass


class NonFiniteError(SemispecError, ValueError):
    pass


class SingularPivotError(SemispecError):
    """A pivot fell below the singularity threshold.

    When raised from a resolvent evaluation this means the requested point
    sits (numerically) on the spectrum.
    """

    def __init__(self, message, pivot=None, threshold=None):
        super().__init__(message)
        self.pivot = pivot
        self.threshold = threshold


class ConvergenceError(SemispecError):
    def __init__(self, message, defect=None):
        super().__init__(message)
        self.defect = defect


class ClusteringAmbiguityError(SemispecError):
    pass


class GapTooSmallError(SemispecError):
    pass


class ProjectionInvariantError(SemispecError):
    def __init__(self, message, defect_name=None, defect=None):
        super().__init__(message)
        self.defect_name = defect_name
        self.defect = defect


class WindowTooShortError(SemispecError, ValueError):
    pass


class NotApplicableError(SemispecError):
    """Estimator preconditions (e.g. exponential order) are not met."""


class NoEligibleEigenspaceError(SemispecError, ValueError):
    pass


class InputError(SemispecError, ValueError):
    """Malformed user input (pair files, CLI options)."""
