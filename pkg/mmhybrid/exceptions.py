class HybridError(Exception):
    pass


class ConfigError(HybridError, ValueError):
    pass


class DimensionMismatch(HybridError, ValueError):
    pass


class NonFiniteError(HybridError, ValueError):
    pass


class BitsOutOfRange(HybridError, ValueError):
    pass


class DegenerateChannel(HybridError):
    """No energy left in the (deflated) channel to place another stream."""


class SpanCollapse(HybridError):
    """A vector lies in the span of an orthonormal basis."""


class RankDeficient(HybridError):
    pass


class InstanceTooLarge(HybridError):
    pass


class SingularCombiner(HybridError):
    pass


class ZeroCombinerColumn(HybridError):
    pass


# Failures that mark a single trial as skipped instead of aborting a sweep
TRIAL_SKIP_ERRORS = (
    DegenerateChannel,
    SpanCollapse,
    RankDeficient,
    SingularCombiner,
    ZeroCombinerColumn,
)
