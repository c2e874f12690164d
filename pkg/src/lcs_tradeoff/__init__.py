"""Longest common substring under a working-space budget."""

from __future__ import annotations

from .docstore import DecodeError, DocPair, Span, SpaceAccountant, accounting, load_documents, make_pair
from .driver import DriverConfig, InvariantError, LCSResult, lcs, lcs_const_space
from .lcas import AnchorSets, Witness, solve_lcas
from .lcs_ell import EllParams, lcs_ell_base, lcs_ell_const_space, lcs_ell_tradeoff, self_reduce

__all__ = [
    "AnchorSets", "DecodeError", "DocPair", "DriverConfig", "EllParams", "InvariantError",
    "LCSResult", "Span", "SpaceAccountant", "Witness", "accounting", "lcs", "lcs_const_space",
    "lcs_ell_base", "lcs_ell_const_space", "lcs_ell_tradeoff", "load_documents", "make_pair",
    "self_reduce", "solve_lcas",
]
