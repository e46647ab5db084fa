"""AXY conditional-phase gate designer and simulator."""

from ._axygate import *  # noqa: F401,F403
from ._axygate import __version__  # noqa: F401
