from typing import Optional


class DatasetError(ValueError):
    """Problem with an input dataset (file or in-memory)."""


class EmptyDatasetError(DatasetError):
    pass


class ParseError(DatasetError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(ValueError):
    """JSON document does not match the expected schema."""


class StructureError(RuntimeError):
    """An internal structural invariant does not hold (invalid tree, cycle, id mismatch...)."""
