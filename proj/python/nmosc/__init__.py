"""Exact reduced dynamics of an oscillator coupled to a bosonic bath."""

try:
    from ._nmosc import *  # noqa: F401,F403
    from ._nmosc import oracle  # noqa: F401
except ImportError:  # running against a build tree
    from _nmosc import *  # noqa: F401,F403
    from _nmosc import oracle  # noqa: F401

__version__ = "1.0.0"
