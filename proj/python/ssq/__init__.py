"""Entanglement criteria for symmetric qubit states (2- and 3-qubit entanglement through
collective-spin inequalities, a PPT oracle and P-representation certificates).

States are NumPy complex arrays: 2^N x 2^N density matrices, qubit 0 the most
significant bit. Search functions take SearchConfig fields as keyword arguments.
"""

from ._ssq import *  # noqa: F401,F403
from ._ssq import SsqError

__all__ = [name for name in dir() if not name.startswith("_")]
