"""SVR-CFA single-source 2D DOA estimation with a MUSIC baseline."""

from svrdoa._core import *  # noqa: F401,F403
from svrdoa._core import __doc__  # noqa: F401

__version__ = "0.1.0"
