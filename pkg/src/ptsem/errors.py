"""Exception hierarchy shared by every module."""


class PTSError(Exception):
    """Base class for library errors that are not parse errors."""


class ParseError(SyntaxError):
    """Malformed formula, rule, sequent or file text.

    ``column`` is 1-based and points at the offending character, or one past
    the end of input for truncated text.
    """

    def __init__(self, message: str, text: str = "", column: int = 0, line: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.msg = message
        self.text = text
        self.column = column
        self.offset = column
        self.lineno = line

    def __str__(self):
        return f"{self.msg} (line {self.lineno}, column {self.column})"


class ReservedNameError(ParseError):
    """``bot`` used where a bindable name is required."""


class NonAtomicError(ParseError):
    """A rule label that is not an atom."""


class LevelBoundError(PTSError):
    pass


class UniverseMismatchError(PTSError):
    pass


class IllFormedDerivation(PTSError):
    def __init__(self, message: str, node=None):
        super().__init__(message)
        self.node = node


class DischargeScopeError(IllFormedDerivation):
    pass


class OverlapError(PTSError):
    pass


class ConclusionMismatchError(PTSError):
    pass


class ContractViolation(PTSError):
    """A reduction output changed the conclusion or grew the open assumptions."""


class NotDerivable(PTSError):
    pass
