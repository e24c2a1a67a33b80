"""Exception types raised across the package."""


class FiberGraphError(Exception):
    pass


class DimensionMismatch(FiberGraphError, ValueError):
    pass


class UnboundedSearch(FiberGraphError):
    def __init__(self, coordinate, message=None):
        self.coordinate = coordinate
        super().__init__(message or f"no finite bound could be certified for coordinate {coordinate}")


class PointednessViolated(FiberGraphError, ValueError):
    pass


class BudgetExceeded(FiberGraphError):
    """An enumeration or construction would exceed its configured size cap."""


class BoxTooLarge(BudgetExceeded):
    pass


class SizeBudgetExceeded(BudgetExceeded):
    pass


class NegativeInput(FiberGraphError, ValueError):
    pass


class MoveNotInKernel(FiberGraphError, ValueError):
    pass


class EmptyGraph(FiberGraphError, ValueError):
    pass


class EmptyFiber(FiberGraphError, ValueError):
    pass


class IsolatedVertex(FiberGraphError, ValueError):
    pass


class IsomorphismError(FiberGraphError, AssertionError):
    pass
