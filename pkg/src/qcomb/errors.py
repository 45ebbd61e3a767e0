"""Exception types shared across the package."""


class DegenerateModelError(ValueError):
    """The model has no meaningful answer here (zero mean signal or zero noise)."""


class ExtrapolationError(ValueError):
    """A lookup fell outside the tabulated range; silent extrapolation is refused."""


class TableFormatError(ValueError):
    """An absorption table failed to parse; the message names the offending line."""
