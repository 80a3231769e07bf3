"""Exception types shared across the toolkit."""


class OrliczKitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(OrliczKitError, ValueError):
    """An argument lies outside the domain of the operation."""


class DimensionError(OrliczKitError, ValueError):
    """Point or grid dimension does not match the object it is used with."""


class SupportOverflowError(OrliczKitError, ValueError):
    """A translation would push nonzero cells outside the grid box."""

    def __init__(self, message, clipped_mass):
        super().__init__(message)
        self.clipped_mass = clipped_mass


class PreconditionError(OrliczKitError):
    """The hypothesis of a checked implication does not hold."""


class ConfigError(OrliczKitError, ValueError):
    """A configuration document failed validation.

    ``errors`` is a list of ``(path, message)`` pairs, one per offending key.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{path or '<root>'}: {msg}" for path, msg in self.errors))
