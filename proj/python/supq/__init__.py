"""Superposition measures for finite-dimensional mixed quantum states."""

try:
    from supq._supq import *  # noqa: F401,F403
    from supq._supq import __doc__  # noqa: F401
except ImportError:  # running against a build tree
    from _supq import *  # noqa: F401,F403
    from _supq import __doc__  # noqa: F401
