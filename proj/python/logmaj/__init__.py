"""Numerical verification of eigenvalue log-majorisation inequalities."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
