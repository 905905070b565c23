"""Python bindings for the Trotter error toolkit."""

from trotter_bounds._core import *  # noqa: F401,F403
