"""Exception hierarchy shared by every layer of the engine."""


class LogHHError(Exception):
    """Base class for all engine errors."""


class CompositionNonzero(LogHHError):
    pass


class NotInjective(LogHHError):
    pass


class BudgetExceeded(LogHHError):
    """A configured computational cap was hit; results are withheld, never truncated."""


class NotGraded(LogHHError):
    pass


class NotFiniteDimensional(LogHHError):
    pass


class InvalidSpec(LogHHError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid log ring spec")


class NotFramed(LogHHError):
    pass


class NotGenerating(LogHHError):
    pass


class RelationNotKilled(LogHHError):
    pass


class WrongCharacteristic(LogHHError):
    pass


class UnstableTruncation(LogHHError):
    pass


class ParseError(LogHHError):
    def __init__(self, message, line=1, column=1, expected=(), context=None):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        self.context = context
        where = f"line {line}, column {column}"
        if context:
            where = f"{context}: {where}"
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}: {message}{exp}")


class SchemaError(LogHHError):
    pass
