"""
Entropy Algebra Toolkit
"""

from src.version import __version__
