"""
Hiérarchie d'erreurs du domaine.

Chaque erreur porte un `code` lisible par machine (le nom de la classe), repris
tel quel dans l'objet d'erreur JSON émis par la CLI.
"""


class QuadraticFieldError(ValueError):
    """Base class for every domain error raised by quadrank."""

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


# --- qfield ---
class NotSquarefree(QuadraticFieldError):
    pass


class NotGreaterThanOne(QuadraticFieldError):
    pass


class MixedFields(QuadraticFieldError):
    pass


class DivisionByZero(QuadraticFieldError, ZeroDivisionError):
    pass


class MalformedInput(QuadraticFieldError):
    """Unparseable element text, ideal JSON, config or coefficient file."""


# --- ideals ---
class ZeroIdeal(QuadraticFieldError):
    pass


class NotIntegral(QuadraticFieldError):
    pass


class NotAnIdeal(QuadraticFieldError):
    """HNF data (a, b) that does not describe an ideal: a must divide N(b+ω)."""


class NotPositive(QuadraticFieldError):
    """Window reduction needs α > 0 in the first embedding."""


# --- cfrac ---
class RationalInput(QuadraticFieldError):
    pass


class IndexTooSmall(QuadraticFieldError):
    pass


class RangeError(QuadraticFieldError):
    pass


# --- indec ---
class NotInIdealPlus(QuadraticFieldError):
    pass


class NotPrincipal(QuadraticFieldError):
    pass


# --- zeta ---
class DegreeUnsupported(QuadraticFieldError):
    pass


class InconsistentSample(QuadraticFieldError):
    pass


# --- bounds ---
class DomainError(QuadraticFieldError):
    pass


class DegreeTooSmall(QuadraticFieldError):
    pass


class NoCoefficientOfRequiredSign(QuadraticFieldError):
    pass


class DegreeTooLarge(QuadraticFieldError):
    pass


class MissingCoefficient(QuadraticFieldError):
    pass


class NotInCodifferent(QuadraticFieldError):
    pass


class NotPositiveDefinite(QuadraticFieldError):
    pass


class UndecidableComparison(QuadraticFieldError):
    """An interval comparison stayed undecided after every precision escalation."""


# --- cli ---
class UsageError(Exception):
    """Bad command line; reported with exit code 2 rather than as a domain error."""

    def to_dict(self) -> dict:
        return {"error": "UsageError", "message": str(self)}
