"""Split a multigraph into k forests plus one forest with small components, or show it is too dense."""

from .graph import GraphFormatError, MultiGraph, parse_edge_list

__version__ = "0.1.0"
__all__ = ["GraphFormatError", "MultiGraph", "parse_edge_list", "__version__"]
