"""Exception types shared across the package."""


class RelfreeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidLetter(RelfreeError):
    """A letter refers to a generator index outside the alphabet."""


class AlphabetMismatch(RelfreeError):
    """Two words from different alphabets were combined."""


class EmptyWord(RelfreeError):
    """An operation that needs a nonempty word received the empty word."""


class InvalidIndex(RelfreeError):
    """An index argument is outside its documented range."""


class InvalidParams(RelfreeError):
    """A parameter triple violates its divisibility or positivity constraints."""


class ZeroExponent(RelfreeError):
    """A relator template was asked to use exponent multiplier f = 0."""


class EmptyInput(RelfreeError):
    """An operation over a collection received an empty or degenerate input."""


class RankTooSmall(RelfreeError):
    """The construction needs at least two generators."""


class NonPositiveParameter(RelfreeError):
    """A chain parameter is zero or negative."""


class BrokenChainOrder(RelfreeError):
    """The strict descending order of the parameter chain is violated."""


class Unsatisfiable(RelfreeError):
    """The greedy parameter search could not satisfy a catalog item."""

    def __init__(self, item_id: str, message: str = ""):
        self.item_id = item_id
        super().__init__(message or f"no admissible value satisfies item {item_id!r}")


class BudgetExceeded(RelfreeError):
    """A bounded search or rewriting loop ran out of budget."""


class OracleBudgetExceeded(BudgetExceeded):
    """A conjugacy/identity oracle exhausted its budget; verdicts are indeterminate."""

    def __init__(self, indeterminate=(), message: str = ""):
        self.indeterminate = list(indeterminate)
        super().__init__(message or "oracle budget exceeded")


class WitnessNotFound(RelfreeError):
    """No conjugating word realizes the claimed identity."""


class MalformedCertificate(RelfreeError):
    """A diagram certificate is structurally unreadable (dangling refs, empty cycles)."""


class TraceMismatch(RelfreeError):
    """Replaying a rewriting trace diverged from the recorded steps."""


class Unsupported(RelfreeError):
    """The input is well-formed but outside the supported fragment."""
