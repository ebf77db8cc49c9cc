"""Exception hierarchy shared by all modules."""


class Pu31Error(ValueError):
    """Base class for every error raised by this package."""


class ZeroVector(Pu31Error):
    pass


class ConvergenceFailure(Pu31Error):
    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class InfinityOperand(Pu31Error):
    pass


class NotNullVector(Pu31Error):
    pass


class VerticalChainUnsupported(Pu31Error):
    pass


class NonPositivePolar(Pu31Error):
    pass


class CoincidentPoints(Pu31Error):
    pass


class AsymptoticToFixedChain(Pu31Error):
    pass


class FormMismatch(Pu31Error):
    pass


class NotUnimodularDeterminant(Pu31Error):
    pass


class NoNegativeEigenvector(Pu31Error):
    pass


class OutOfRangeParameter(Pu31Error):
    pass


class NotOnEdge(Pu31Error):
    pass


class NotParabolic(Pu31Error):
    pass


class AxisUnavailable(Pu31Error):
    pass


class NeighborhoodConditionViolated(Pu31Error):
    pass


class NotHyperParallel(Pu31Error):
    pass
