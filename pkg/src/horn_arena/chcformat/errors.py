from __future__ import annotations


class ChcFormatError(Exception):
    """Base class for benchmark-level failures.

    ``rule`` is a stable machine-readable reason code; ``line``/``col``
    are 1-based and may be 0 when no source location applies.
    """

    kind = "error"

    def __init__(self, rule: str, message: str, line: int = 0, col: int = 0):
        super().__init__(message)
        self.rule = rule
        self.message = message
        self.line = line
        self.col = col

    @property
    def location(self) -> str:
        return f"{self.line}:{self.col}"

    def __str__(self) -> str:
        return f"{self.kind} {self.rule} at {self.location}: {self.message}"


class LexicalError(ChcFormatError):
    kind = "lexical"


class SyntaxErrorInScript(ChcFormatError):
    kind = "syntax"


class SortError(ChcFormatError):
    kind = "sort"


class UnknownCommandError(ChcFormatError):
    kind = "command"


class NormalizationError(ChcFormatError):
    kind = "normalize"
