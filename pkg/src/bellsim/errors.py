"""Exception types shared across the package."""


class BellsimError(Exception):
    """Base class for all library errors."""


class InputError(BellsimError, ValueError):
    """An argument violates a documented precondition."""


class ScenarioTooLargeError(InputError):
    """Strategy enumeration would exceed the hard size guard."""


class MixtureFileError(InputError):
    """A mixture description file failed to parse or validate."""


class InternalConsistencyError(BellsimError, RuntimeError):
    """A computed quantity violates an internal invariant (likely a bug)."""
