"""Mean value sets of divergence-form elliptic operators.

Thin re-export of the compiled extension. Fields are numpy arrays shaped like
the grid; masks are boolean arrays of the same shape.
"""

from ._core import *  # noqa: F401,F403
from ._core import MvsetError, __doc__  # noqa: F401

__version__ = "0.1.0"
