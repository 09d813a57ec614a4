class InvalidArgument(ValueError):
    """Raised when an input violates an operation's precondition."""


class InvalidGeometry(InvalidArgument):
    """Raised for degenerate link geometry, e.g. coincident endpoints."""


class InfeasibleSchedule(RuntimeError):
    """Raised when no schedule meeting the demand can be built."""

    def __init__(self, message, subset_id=None):
        super().__init__(message)
        self.subset_id = subset_id
