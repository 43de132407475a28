"""Exception hierarchy shared by all dnascan modules."""


class DnaScanError(Exception):
    """Base class; ``kind`` is the short tag printed by the CLI."""

    kind = "Error"


class PatternError(DnaScanError, ValueError):
    kind = "PatternError"


class EmptyPatternSet(PatternError):
    kind = "EmptyPatternSet"


class UnequalLength(PatternError):
    kind = "UnequalLength"


class IllegalByte(PatternError):
    kind = "IllegalByte"


class DuplicatePattern(PatternError):
    kind = "DuplicatePattern"


class InvalidPlan(DnaScanError, ValueError):
    kind = "InvalidPlan"


class EmptySequence(DnaScanError, ValueError):
    kind = "EmptySequence"


class ParseError(DnaScanError, ValueError):
    kind = "ParseError"

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class InternalError(DnaScanError, RuntimeError):
    kind = "InternalError"
