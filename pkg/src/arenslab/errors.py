"""Exception hierarchy shared by every module of the workbench."""


class WorkbenchError(Exception):
    pass


class DomainMismatch(WorkbenchError, ValueError):
    """An element, operator or functional does not live on the expected space."""


class NotRepresentable(WorkbenchError):
    """A slice or limit left the computable models."""


class Unsupported(WorkbenchError):
    pass


class NotMultimorphism(WorkbenchError):
    pass


class ClosureBudgetExceeded(WorkbenchError):
    pass


class StabilizationFailure(NotRepresentable):
    """An iterated limit did not settle before the index cap."""


class InternalInvariantViolation(WorkbenchError):
    """A fast-path certificate disagreed with its definitional cross-check."""


class ScenarioError(WorkbenchError):
    """Malformed scenario file.  ``position`` is a human readable locator."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{position}: {message}")
        self.position = position
