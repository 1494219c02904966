"""Exception hierarchy shared across the package."""


class LingamError(Exception):
    """Base class for all errors raised by plingam."""


class DataError(LingamError):
    """Input data is malformed or degenerate."""


class NumericError(LingamError):
    """A numerical routine could not produce a meaningful result."""


class NonFiniteError(DataError):
    def __init__(self, row: int, col: int):
        super().__init__(f"non-finite value at row {row}, column {col}")
        self.row = row
        self.col = col


class ZeroVarianceError(DataError):
    def __init__(self, col=None, name: str | None = None, detail: str | None = None):
        label = name if name is not None else col
        msg = "zero variance" if label is None else f"zero variance in column {label!r}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)
        self.col = col
        self.name = name
        self.detail = detail


class ParseError(DataError):
    def __init__(self, line: int, col: int | None, message: str):
        where = f"line {line}" if col is None else f"line {line}, column {col}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.col = col


class TooFewSamplesError(DataError):
    pass


class TooShortError(DataError):
    pass


class LengthMismatchError(DataError):
    pass


class DimensionMismatchError(DataError):
    pass


class InvalidIndexError(DataError):
    pass


class EmptyCandidatesError(LingamError):
    pass


class InsufficientRowsError(DataError):
    pass


class EmptyAfterPreprocessingError(DataError):
    pass


class SingularDesignError(NumericError):
    pass


class UnstableSystemError(NumericError):
    pass


class OutOfRangeError(LingamError, ValueError):
    pass
