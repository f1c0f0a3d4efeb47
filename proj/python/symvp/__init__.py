"""Certified symmetrized variational principles in finite dimension."""

from ._symvp import *  # noqa: F401,F403
from ._symvp import __doc__  # noqa: F401
