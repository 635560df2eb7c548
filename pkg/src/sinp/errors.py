"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ShapeError(ValueError):
    """A grid has the wrong node count or layout."""


class QuadratureError(ArithmeticError):
    """Refinement budget exhausted before the requested tolerance was met."""

    def __init__(self, message, last_values=()):
        super().__init__(message)
        self.last_values = tuple(last_values)


class NonConvergenceError(RuntimeError):
    """An iteration did not reach its tolerance; ``trace`` holds the history."""

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class RootError(RuntimeError):
    """Safeguarded root solve failed at a grid node."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node
