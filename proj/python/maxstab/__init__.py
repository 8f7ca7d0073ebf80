from ._maxstab import *  # noqa: F401,F403
from ._maxstab import __doc__  # noqa: F401

__version__ = "0.1.0"
