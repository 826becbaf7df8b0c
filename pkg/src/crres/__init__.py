"""Schematic clause sets, carriage-return-list resolution, Herbrand systems."""

from .clauses import (Clause, evaluate, nia_clause_set, normalize_symbols,
                      subsumes, subsumption_reduce, tautology_elim)
from .crlist import CRList, canonical, carriage_return, mid, shift
from .resolution import (ResolutionSchema, ResolutionTree, check_tree,
                         res_step, unfold)
from .terms import normalize, unify

__all__ = [
    "Clause", "CRList", "ResolutionSchema", "ResolutionTree",
    "canonical", "carriage_return", "check_tree", "evaluate", "mid",
    "nia_clause_set", "normalize", "normalize_symbols", "res_step", "shift",
    "subsumes", "subsumption_reduce", "tautology_elim", "unfold", "unify",
]
