"""Utility modules for configuration, errors and matrix I/O."""

from .config import Settings, get_settings
from .matrix_io import read_matrix, write_matrix

__all__ = [
    "Settings",
    "get_settings",
    "read_matrix",
    "write_matrix",
]
