"""Laplace and bi-Laplace boundary value problems on directed networks."""

from ._core import *  # noqa: F401,F403
from ._core import Error, InputError, ResidualError, SingularError, SolvabilityError  # noqa: F401

__version__ = "0.1.0"
