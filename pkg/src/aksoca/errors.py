"""Exception types raised by the library."""


class AksocaError(Exception):
    """Base class for all library errors."""


class CarrierMismatchError(AksocaError, ValueError):
    """A subset or element was passed against the wrong carrier."""


class EnumerationCapError(AksocaError, ValueError):
    """Enumerating a closed family would exceed the configured size cap."""


class FamilyMembershipError(AksocaError, ValueError):
    """A subset is not a member of the closed family it was used with."""


class OcaStructureError(AksocaError, ValueError):
    """The order of a finite algebra is not a complete lattice, or a table is malformed."""


class NotFocaError(AksocaError, ValueError):
    """A construction needing the full adjunction got an algebra without it."""


class UnboundVariableError(AksocaError, LookupError):
    """A polynomial was evaluated with a free variable missing from the environment."""


class InstanceFormatError(AksocaError, ValueError):
    """Malformed instance text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class AxiomViolationError(AksocaError, ValueError):
    """A parsed structure violates its axioms (and saturation was not requested)."""
