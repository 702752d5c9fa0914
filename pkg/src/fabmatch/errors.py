"""Exception types raised by fabmatch."""


class FabmatchError(Exception):
    """Base class for all library errors."""


class DegenerateEdge(FabmatchError, ValueError):
    """Two consecutive vertices coincide, so the curve is not regular."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"degenerate edge at index {index}")


class DimensionMismatch(FabmatchError, ValueError):
    pass


class ParamMismatch(FabmatchError, ValueError):
    pass


class ZeroSample(FabmatchError, ValueError):
    """A transform sample vanishes, which has no preimage curve."""

    def __init__(self, index):
        self.index = index
        super().__init__(f"transform sample {index} is zero")


class ZeroCrossing(FabmatchError, ValueError):
    """The straight line between two transform images passes through 0."""

    def __init__(self, cell, t):
        self.cell = cell
        self.t = t
        super().__init__(f"interpolated image vanishes in cell {cell} at t={t:g}")


class CurveTooSmall(FabmatchError, ValueError):
    pass


class NegativeNorm(FabmatchError, ArithmeticError):
    """A squared kernel norm came out clearly negative."""
