"""Exception types shared across the package."""


class RangeError(ValueError):
    """A precomputed table does not reach far enough.

    ``required`` carries the smallest limit that would have worked, so callers
    (and the command line) can tell the user what to rebuild.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class AccuracyError(RuntimeError):
    """A numerical evaluation could not certify its requested accuracy."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class CacheError(RuntimeError):
    """An on-disk cache is malformed or fails validation."""


class EmptyFamilyError(ValueError):
    """The weight support contains no admissible discriminant."""
