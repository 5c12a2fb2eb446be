"""Capacity bounds for the writing-onto-fast-fading-dirt channel."""

from ._wffd import *  # noqa: F401,F403
from ._wffd import __doc__  # noqa: F401
