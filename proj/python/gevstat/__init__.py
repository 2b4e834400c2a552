"""Block-maxima extreme-value analysis (GEV and Gumbel models)."""

from ._core import *  # noqa: F401,F403
from ._core import GevParams, Model

__all__ = [name for name in dir() if not name.startswith("_")]
