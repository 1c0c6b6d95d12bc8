"""Ethereum transaction statistics, search-trend stitching and lagged
cross-correlation of daily market series."""

from .errors import DataError, ParseError, ShardError
from .series import DailySeries

__version__ = "0.1.0"

__all__ = ["DailySeries", "DataError", "ParseError", "ShardError"]
