"""Error types shared by every module.

Each error carries a stable string ``code`` (``E_SYNTAX``, ``E_NOT_LINEAR``, ...)
so the CLI can report it and tests can match on it.
"""

from __future__ import annotations


class WorkbenchError(ValueError):
    def __init__(self, code: str, message: str = ""):
        self.code = code
        self.message = message or code
        super().__init__(f"{code}: {self.message}")


class ParseError(WorkbenchError):
    """Syntax error with a 1-based line/column position."""

    def __init__(self, message: str, line: int = 1, column: int = 1, code: str = "E_SYNTAX"):
        self.line = line
        self.column = column
        super().__init__(code, f"{message} (line {line}, column {column})")


class SearchLimitError(WorkbenchError):
    """Raised when a search exceeds its node budget or a solution cap.

    ``stats`` holds whatever partial counters were collected before the
    budget ran out.
    """

    def __init__(self, message: str, stats: dict | None = None):
        self.stats = dict(stats or {})
        super().__init__("E_LIMIT", message)
