class InvalidArgument(ValueError):
    """Raised when an operation's preconditions are violated."""


class ReachError(InvalidArgument):
    """An integer lies beyond what the factorization table can handle."""

    def __init__(self, message, parameter=None):
        super().__init__(message)
        self.parameter = parameter
