"""Exception hierarchy shared by all lambdaforge modules.

Exit-code mapping used by the CLI: DomainError -> 1, UsageError -> 2,
ResourceLimitError -> 3.
"""


class LambdaForgeError(Exception):
    """Base class for all lambdaforge errors."""


class DomainError(LambdaForgeError):
    """Input is well-formed but outside the operation's domain."""


class AlignmentError(DomainError):
    """Two polynomials disagree on coefficient ring or variable list."""


class SubstitutionError(DomainError):
    """A substitution assignment is missing a required variable."""


class SymmetryError(DomainError):
    """A polynomial claimed symmetric is not; carries a witness transposition."""

    def __init__(self, message: str, witness: tuple[str, str] | None = None):
        super().__init__(message)
        self.witness = witness


class PrecisionError(DomainError):
    """Requested computation exceeds the available p-adic precision."""


class ResourceLimitError(LambdaForgeError):
    """A documented size/degree limit was exceeded."""


class UsageError(LambdaForgeError):
    """Malformed CLI flags or expression syntax."""


class ParseError(UsageError):
    """Expression syntax error; carries position information."""

    def __init__(self, message: str, line: int = 1, col: int = 0):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col
