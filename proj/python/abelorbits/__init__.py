"""Periodic-orbit analysis of Abel equations dx/dt = A(t) x^3 + B(t) x^2 + C(t) x."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
