"""Thermodynamics of periodically driven open quantum systems."""

from ._qheat import *  # noqa: F401,F403
from ._qheat import __doc__  # noqa: F401

__version__ = "0.1.0"
