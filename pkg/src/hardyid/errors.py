"""Exception types shared across the package."""


class DegenerateDenominatorError(ValueError):
    """Cauchy kernel requested at a point where 1 - conj(zeta)*z vanishes."""


class IllConditionedConfigurationError(RuntimeError):
    """The kernel Gramian of a point configuration is numerically singular."""


class EmptyFeasibleSetError(ValueError):
    """No function within the model-set tolerance is consistent with the data."""


class InconsistentDataError(ValueError):
    """The data vector is not in the range of the observation map."""


class SolverConvergenceError(RuntimeError):
    """An l1 solve failed to produce a certified solution."""

    def __init__(self, message: str, zeta0: complex | None = None):
        super().__init__(message)
        self.zeta0 = zeta0
