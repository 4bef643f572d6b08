"""Long-time transition asymptotics for the defocusing NLS equation on a nonzero background."""

__version__ = "0.1.0"

from . import phase  # noqa: F401,E402
