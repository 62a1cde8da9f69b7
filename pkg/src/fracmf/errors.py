"""Exception hierarchy shared by all fracmf modules."""


class FracMFError(ValueError):
    """Base class for every error raised by this package."""


class PrecisionError(FracMFError):
    """A value was requested beyond what the available precision justifies."""


class NonInvertibleError(FracMFError):
    pass


class MLDEFitError(FracMFError):
    """Raised when no unique monic MLDE can be fitted.

    ``dims`` carries the diagnostic sizes of the linear system
    (unknowns, rows, rank).
    """

    def __init__(self, message, **dims):
        self.dims = dims
        if dims:
            detail = ", ".join(f"{k}={v}" for k, v in sorted(dims.items()))
            message = f"{message} ({detail})"
        super().__init__(message)


class ResonanceError(FracMFError):
    """An indicial root hits the logarithmic (resonant) case."""


class BranchInconsistencyError(FracMFError):
    pass
