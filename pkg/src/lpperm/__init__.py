"""Exact tools for LP-decodable permutation codes built from compact linear constraints."""

from __future__ import annotations

from .codes import CodeSpec, GroupFamily, WreathElement, code_cardinality, decode_message, encode
from .consolidation import BlockStructure, ConsolidationSpec, consolidate
from .constraints import ConstraintSet, LinearConstraint, Relation, build_doubly_stochastic, build_pure_involution
from .errors import LPPermError
from .graphs import Graph, GraphFamily, build_graph_constraints, make_family
from .lpdecode import lp_decode, ml_bruteforce, simulate, solve_lp_max
from .matrix import RationalMatrix
from .permutation import Permutation
from .polytope import CompactnessReport, Verdict, check_compact, enumerate_vertices

__version__ = "0.1.0"

__all__ = [
    "BlockStructure",
    "CodeSpec",
    "CompactnessReport",
    "ConsolidationSpec",
    "ConstraintSet",
    "Graph",
    "GraphFamily",
    "GroupFamily",
    "LPPermError",
    "LinearConstraint",
    "Permutation",
    "RationalMatrix",
    "Relation",
    "Verdict",
    "WreathElement",
    "build_doubly_stochastic",
    "build_graph_constraints",
    "build_pure_involution",
    "check_compact",
    "code_cardinality",
    "consolidate",
    "decode_message",
    "encode",
    "enumerate_vertices",
    "lp_decode",
    "make_family",
    "ml_bruteforce",
    "simulate",
    "solve_lp_max",
]
