"""Error taxonomy shared across the engine."""


class LooptopError(Exception):
    """Base class for all engine errors."""


class ValidationError(LooptopError):
    """Invalid user input: malformed space data, bad parameters."""


class UnsupportedSpaceError(ValidationError):
    """The space is well-formed but outside the supported families."""


class IntegrityError(LooptopError):
    """An internal cross-check failed.

    Raised when two pipelines that must agree disagree (wrong sign
    convention, non-integral dimension, d*d != 0, ...).  Always a bug or
    an invalid model slipping past validation, never a user mistake.
    """


class WindowError(LooptopError):
    """A quantity was requested outside the computed truncation window."""
