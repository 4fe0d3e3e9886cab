"""Common exception base for all editkit domain errors."""


class EditKitError(Exception):
    """Base class for every domain error raised by this package.

    Catching this at a boundary (CLI, tool dispatch) separates expected
    editing/evaluation failures from genuine bugs.
    """
