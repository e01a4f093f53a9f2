"""Embedded reference datasets."""

from . import baseball

__all__ = ["baseball"]
