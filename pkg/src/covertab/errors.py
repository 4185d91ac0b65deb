"""Exception hierarchy. ``name`` is the machine-readable tag printed by the CLI."""


class CovertabError(Exception):
    name = "CovertabError"
    exit_code = 1


class ValidationError(CovertabError, ValueError):
    name = "ValidationError"
    exit_code = 2


class ZeroColumn(ValidationError):
    name = "ZeroColumn"

    def __init__(self, column: int):
        self.column = column
        super().__init__(f"column {column} is the zero vector")


class RowSumNonzero(ValidationError):
    name = "RowSumNonzero"

    def __init__(self, row: int):
        self.row = row
        super().__init__(f"row {row} does not sum to 0 mod N")


class BadShape(ValidationError):
    name = "BadShape"


class ShapeMismatch(ValidationError):
    name = "ShapeMismatch"


class RepeatedPoint(ValidationError):
    name = "RepeatedPoint"


class CharacterMismatch(ValidationError):
    name = "CharacterMismatch"


class NonIntegralGenus(CovertabError, ArithmeticError):
    name = "NonIntegralGenus"


class UnsupportedFactor(CovertabError):
    name = "UnsupportedFactor"


class SpecTooLarge(CovertabError):
    name = "SpecTooLarge"
    exit_code = 3

    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"search box has {size} raw data, limit is {limit}")


class TermLimitExceeded(CovertabError):
    name = "TermLimitExceeded"
    exit_code = 4

    def __init__(self, terms: int, limit: int):
        self.terms = terms
        self.limit = limit
        super().__init__(f"symbolic entry needs {terms} terms, limit is {limit}")
