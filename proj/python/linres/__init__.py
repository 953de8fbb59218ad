"""Cayley-Hamilton analysis of linear reservoir computers.

Thin python façade over the C++ core: reservoir builders, the x0 = C*s
factorization, controllability rank/nullspace reports, and the
delayed-recall experiment drivers.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
