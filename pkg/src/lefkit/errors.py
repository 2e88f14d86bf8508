"""Exception hierarchy shared by all lefkit modules."""


class LefkitError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(LefkitError):
    """Structural data fails an invariant (bad complex, sheaf, map, fan...)."""


class PreconditionError(LefkitError):
    """An operation was called outside its contract."""


class GenericityError(LefkitError):
    """A test function failed its genericity certificate, or draws ran out."""


class ScenarioError(LefkitError):
    """Scenario text could not be parsed or resolved."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = "line %d%s: %s" % (
                line,
                "" if column is None else (", col %d" % column),
                message,
            )
        super().__init__(message)
