"""Lexicographic local search over k spanning trees plus a bounded forest."""

from .order import AlreadyDone, LegalOrder, Potential, minimal_legal_order, residue, select_root
from .search import Outcome, run
from .state import RED, InvalidState, RejectedMove, State

__all__ = ["AlreadyDone", "LegalOrder", "Potential", "minimal_legal_order", "residue",
           "select_root", "Outcome", "run", "RED", "InvalidState", "RejectedMove", "State"]
