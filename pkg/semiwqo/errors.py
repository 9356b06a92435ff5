# errors.py

from typing import Optional


class SemiWQOError(Exception):
    """Base class for every error raised by the package."""


class DigraphFormatError(SemiWQOError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class NotSemiCompleteError(SemiWQOError):
    def __init__(self, pair, index: Optional[int] = None):
        where = f" (member {index})" if index is not None else ""
        super().__init__(f"digraph is not semi-complete{where}: pair {pair} has no arc")
        self.pair = pair
        self.index = index


class LimitExceededError(SemiWQOError):
    def __init__(self, what: str, value: int, limit: int):
        super().__init__(f"{what}: {value} exceeds the configured limit {limit}")
        self.what = what
        self.value = value
        self.limit = limit


class WidthError(SemiWQOError):
    def __init__(self, width: int, c: int, index: Optional[int] = None):
        where = f" (member {index})" if index is not None else ""
        super().__init__(f"width {width} exceeds c={c}{where}")
        self.width = width
        self.c = c
        self.index = index


class CodewordMismatchError(SemiWQOError):
    """Codewords encoded under different width bounds are not comparable."""


class CodewordFormatError(SemiWQOError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ModelFormatError(SemiWQOError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ReconstructionError(SemiWQOError):
    """An internal construction failed where the theory guarantees success."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace
