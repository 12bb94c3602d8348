"""Quantum query-complexity workbench.

Simulated search with exact query accounting, small-error and zero-error
algorithms, polynomial lower-bound tools and brute-force measures of small
Boolean functions.
"""

from .oracle import BitOracle, QueryStats, planted_input

__version__ = "0.1.0"

__all__ = ["BitOracle", "QueryStats", "planted_input", "__version__"]
