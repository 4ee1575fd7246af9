"""Exception types shared across the package."""


class FockgenError(Exception):
    """Base class for all package errors."""


class TailMassExceeded(FockgenError):
    """Truncation too small: the top Fock amplitude carries non-negligible weight."""


class DimensionMismatch(FockgenError):
    """Operands live in incompatible truncated spaces."""


class TruncationTooLarge(FockgenError):
    """Dense-propagator construction refused: requested space exceeds the cost guard."""


class VanishingBranch(FockgenError):
    """The post-selected branch has probability below representable range."""


class DegenerateTarget(FockgenError):
    """Requested period is undefined because the targeted Rabi frequency vanishes."""


class InconsistentStrategy(FockgenError):
    """Strategy kind does not apply to the requested target kind."""


class SchemaError(FockgenError, ValueError):
    """Run configuration failed validation; `path` points at the offending field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
