"""Exception hierarchy for sharpgan_kit."""


class SharpGanKitError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(SharpGanKitError, ValueError):
    pass


class ModeError(SharpGanKitError, ValueError):
    pass


class DimensionMismatch(SharpGanKitError, ValueError):
    pass


class TooSmall(SharpGanKitError, ValueError):
    pass


class DegenerateReference(SharpGanKitError, ValueError):
    pass


class EmptyBatch(SharpGanKitError, ValueError):
    pass


class ThresholdError(SharpGanKitError, ValueError):
    pass


class FormatError(SharpGanKitError, ValueError):
    pass


class NoPairs(SharpGanKitError):
    pass
