"""Exception types shared across the package."""

from __future__ import annotations


class StablehomError(Exception):
    """Base class for all errors raised by this package."""

    code = "Error"


class FieldMismatch(StablehomError):
    code = "FieldMismatch"


class VariableCountMismatch(StablehomError):
    code = "VariableCountMismatch"


class RankMismatch(StablehomError):
    code = "RankMismatch"


class NonPrimeModulus(StablehomError):
    code = "NonPrimeModulus"


class InhomogeneousIdeal(StablehomError):
    code = "InhomogeneousIdeal"


class InhomogeneousEntry(StablehomError):
    code = "InhomogeneousEntry"

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        super().__init__(message)
        self.row = row
        self.col = col


class IllDefinedMap(StablehomError):
    """A generator matrix does not carry source relations into target relations."""

    code = "IllDefinedMap"

    def __init__(self, message: str, relation_index: int | None = None):
        super().__init__(message)
        self.relation_index = relation_index


class WindowTooSmall(StablehomError):
    code = "WindowTooSmall"


class NotRbm(StablehomError):
    """Raised by the perfect-monomorphism constructor on obstructed input.

    Carries the Betti table of the nonzero obstruction module.
    """

    code = "NotRbm"

    def __init__(self, message: str, obstruction_betti=None):
        super().__init__(message)
        self.obstruction_betti = obstruction_betti


class NotAComplex(StablehomError):
    code = "NotAComplex"


class ResourceLimitExceeded(StablehomError):
    code = "ResourceLimit"

    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


class ParseFailure(StablehomError):
    """Session text failed to parse; carries structured diagnostics."""

    code = "ParseFailure"

    def __init__(self, diagnostics):
        super().__init__("; ".join(d.render() for d in diagnostics))
        self.diagnostics = list(diagnostics)
