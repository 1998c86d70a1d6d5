"""Compute-and-forward over block-fading channels with algebraic lattices."""

from ._cfal import *  # noqa: F401,F403
from ._cfal import CfalError, __doc__  # noqa: F401

__version__ = "0.1.0"
