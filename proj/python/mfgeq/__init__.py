"""Minimal and maximal mean field equilibria by monotone Picard iteration."""

from ._mfgeq import *  # noqa: F401,F403
from ._mfgeq import __version__  # noqa: F401
