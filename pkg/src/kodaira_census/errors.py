"""Exception hierarchy shared across the package."""


class KodairaCensusError(Exception):
    """Base class for all package errors."""


class SingularCurve(KodairaCensusError, ValueError):
    pass


class NotReduced(KodairaCensusError, ValueError):
    pass


class BadPrime(KodairaCensusError, ValueError):
    pass


class BadType(KodairaCensusError, ValueError):
    pass


class BadCombination(KodairaCensusError, ValueError):
    pass


class DuplicatePrime(KodairaCensusError, ValueError):
    pass


class FactorizationIncomplete(KodairaCensusError, ArithmeticError):
    """A composite cofactor could not be split."""

    def __init__(self, cofactor: int, partial: dict[int, int] | None = None):
        super().__init__(f"could not split composite cofactor {cofactor}")
        self.cofactor = cofactor
        self.partial = dict(partial or {})


class BoxTooLarge(KodairaCensusError, ValueError):
    pass


class XTooSmall(KodairaCensusError, ValueError):
    pass


class UnknownLemma(KodairaCensusError, KeyError):
    def __str__(self) -> str:
        return f"unknown lemma id {self.args[0]!r}"


class MissingParameter(KodairaCensusError, ValueError):
    pass


class EmptyDenominator(KodairaCensusError, ZeroDivisionError):
    pass


class CorruptCheckpoint(KodairaCensusError, ValueError):
    pass


class CapacityError(KodairaCensusError, OverflowError):
    """Requested work exceeds what the fixed-width kernels can represent."""
