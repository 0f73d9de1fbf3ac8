"""Weighted graph Laplacian estimates, heat semigroup and Harnack checks."""

from ._graphgrad import *  # noqa: F401,F403
from ._graphgrad import GraphgradError, __version__

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
