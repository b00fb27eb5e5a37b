class SquarelabError(Exception):
    """Base class for library errors."""


class InvalidInputError(SquarelabError, ValueError):
    """Raised when arguments violate an operation's preconditions."""


class HardAssertionError(SquarelabError):
    """A checked mathematical fact failed; results must not be trusted."""


class BudgetExceededError(SquarelabError):
    """A bounded search ran out of its configured step budget."""
