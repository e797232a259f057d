"""Decentralized optimization over time-varying graphs."""

from ._tvopt import *  # noqa: F401,F403
from ._tvopt import __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
