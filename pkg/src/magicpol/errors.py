"""Exception hierarchy shared by all modules."""


class MagicPolError(Exception):
    """Base class for every error raised by magicpol."""


class UnitError(MagicPolError, ValueError):
    """Unknown or unsupported unit tag."""


class DomainError(MagicPolError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DataError(MagicPolError):
    """Malformed or inconsistent data file.

    ``path`` and ``line`` locate the offending record when known.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


class ModelError(MagicPolError):
    """A polarizability model cannot be built for the requested target."""


class EmptyModelError(ModelError):
    pass


class UnsupportedTargetError(ModelError):
    pass


class ResonanceProximityError(DomainError):
    """Frequency falls inside the exclusion window around a resonance."""

    def __init__(self, message, channel=None, omega_res=None):
        self.channel = channel
        self.omega_res = omega_res
        super().__init__(message)


class DegenerateMatchError(MagicPolError):
    """Both sides of a matching problem are identical, so no root is isolated."""


class DataWarning(UserWarning):
    """Non-fatal irregularity in an ingested dataset."""
