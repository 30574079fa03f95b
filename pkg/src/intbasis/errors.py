"""Error types shared across the package.

Each maps to a CLI exit code so failures stay diagnosable from scripts:
parse errors 2, contract violations 3, precision exhaustion 4, structural
invariant failures 5.
"""


class CurveParseError(ValueError):
    """Raised when the curve grammar rejects the input string."""

    def __init__(self, message, line=1, column=1):
        super().__init__("line %d, column %d: %s" % (line, column, message))
        self.line = line
        self.column = column
        self.bare_message = message


class ContractViolation(ValueError):
    """Input outside an operation's stated domain (reducible curve, not monic
    in y, shortcut refused, ...)."""


class PrecisionError(RuntimeError):
    """A truncated computation ran out of known terms.

    Carries the order the caller should retry with, when known.
    """

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class StructuralError(RuntimeError):
    """An internal invariant that should be unreachable for valid input was
    violated; indicates a bug or an input escaping the domain checks."""
