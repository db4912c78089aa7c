"""Mori-Zwanzig coarse-graining of overdamped Langevin dynamics."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
