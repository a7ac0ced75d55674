"""Exception types shared across the package."""


class CarlitzError(Exception):
    """Base class for all package-specific errors."""


class SpecMismatch(CarlitzError, ValueError):
    """Operands belong to different field specs."""


class DivisionByZero(CarlitzError, ZeroDivisionError):
    """Inversion of zero in a field or series ring."""


class InvalidCharacteristic(CarlitzError, ValueError):
    """A characteristic parameter is not prime."""


class NonUnit(CarlitzError, ValueError):
    """A series with zero constant term was used where a unit is required."""


class BudgetExceeded(CarlitzError, RuntimeError):
    """An enumeration or linear-algebra budget would be exceeded."""


class InsufficientPrecision(CarlitzError, ValueError):
    """Input precision is too low for the requested operation."""


class ShapeMismatch(CarlitzError, ValueError):
    """Jet matrices have incompatible order, spec, or precision."""


class WindowEmpty(CarlitzError, ValueError):
    """No overlapping u-precision window is left to compare on."""


class SegmentViolation(CarlitzError, RuntimeError):
    """Achieved torsion levels do not form an initial segment."""


class MalformedOrder(CarlitzError, ValueError):
    """A computed image order is not of the expected structural form."""


class UnsupportedOrder(CarlitzError, ValueError):
    """No defining polynomial is available for the requested field order."""


class ParseError(CarlitzError, ValueError):
    """Malformed series literal or config entry."""


class CrossCheckMismatch(CarlitzError, RuntimeError):
    """Brute-force and closed-form image orders disagree."""

    def __init__(self, n, brute, formula):
        super().__init__(
            f"image order mismatch at N={n}: brute={brute}, formula={formula}"
        )
        self.n = n
        self.brute = brute
        self.formula = formula
