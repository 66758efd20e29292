"""
Package initialization for src.
"""

__version__ = "0.1.0"
