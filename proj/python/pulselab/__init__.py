from ._core import *  # noqa: F401,F403
from ._core import __all__  # noqa: F401
