from . import defaults
from .tolerances import DEFAULT_TOLERANCES, Tolerances

__all__ = ["DEFAULT_TOLERANCES", "Tolerances", "defaults"]
