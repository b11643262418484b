"""Linear-optical quantum simulation bindings."""

from ._loqs import *  # noqa: F401,F403
from ._loqs import __version__  # noqa: F401
