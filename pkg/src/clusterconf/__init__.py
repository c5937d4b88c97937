"""Cluster configuration spaces of finite type: u-equations, point counts, tropical checks."""

from .cluster_engine import ar_walk, dual_data, exchange_graph
from .compatibility import compatibility_table
from .dynkin import DynkinType, Orientation, default_orientation, parse_orientation, parse_type

__version__ = "0.1.0"

__all__ = [
    "DynkinType",
    "Orientation",
    "ar_walk",
    "compatibility_table",
    "default_orientation",
    "dual_data",
    "exchange_graph",
    "parse_orientation",
    "parse_type",
]
