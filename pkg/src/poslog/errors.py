"""Exception hierarchy shared by every module."""


class PoslogError(Exception):
    """Base class for all errors raised by poslog."""


class ParseError(PoslogError):
    """Malformed input text.  Carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class PositivityError(ParseError):
    """A negation, implication or universal quantifier where only positive syntax is allowed."""


class UnknownSymbolError(ParseError):
    pass


class ArityError(ParseError):
    pass


class SignatureError(PoslogError):
    """Objects over different or ill-formed signatures were combined."""


class EvaluationError(PoslogError):
    """Unbound variable or ill-sorted input during evaluation."""


class NotAModelError(PoslogError):
    """A structure that was required to satisfy a theory does not."""


class MorphismError(PoslogError):
    """A map is not total, or not of the kind it was claimed to be."""


class BudgetExhausted(PoslogError):
    """A search hit its node or wall-time limit before finishing.

    Raised at the point of exhaustion, after every result found within the
    budget has already been produced, so a stream is never cut off silently.
    """
