"""
Version of the Entropy Algebra Toolkit, recorded in every report's run block
"""

from typing import Tuple

__version__ = "0.2.0"


def get_version() -> str:
    return __version__


def get_version_info() -> Tuple[int, ...]:
    """(major, minor, patch) parsed from the version string."""
    return tuple(int(part) for part in __version__.split("."))
