"""Strategic classification toolkit (compiled core)."""

from ._gsc import *  # noqa: F401,F403
from ._gsc import __version__  # noqa: F401
