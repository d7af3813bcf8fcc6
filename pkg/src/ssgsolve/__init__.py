"""Subset sum with digraph constraints on directed co-graphs and series-parallel digraphs."""

from .core import (
    GraphKind,
    GraphSpec,
    Instance,
    ProblemKind,
    Solution,
    certify,
    make_instance,
    parse_instance,
    serialize_instance,
    validate_solution,
)
from .digraph import Digraph, condense, scc, transitive_closure, transitive_reduction
from .errors import (
    InfeasibleSolution,
    NotADagError,
    NotDecomposableError,
    NotInClassError,
    ParseError,
    SsgError,
    TooLargeError,
    VertexError,
)
from .expressions import decompose_msp, eval_dico, eval_msp, parse_dico, parse_msp, to_text
from .oracle import Spectrum, brute_force
from .ssg import (
    solve_ssg_bioriented_clique,
    solve_ssg_cograph,
    solve_ssg_general,
    solve_ssg_msp,
    solve_ssg_sp,
    solve_ssg_transitive_tournament,
)
from .ssgw import solve_ssgw_cograph, solve_ssgw_msp, solve_ssp

__version__ = "0.1.0"

__all__ = [
    "Digraph",
    "GraphKind",
    "GraphSpec",
    "InfeasibleSolution",
    "Instance",
    "NotADagError",
    "NotDecomposableError",
    "NotInClassError",
    "ParseError",
    "ProblemKind",
    "Solution",
    "Spectrum",
    "SsgError",
    "TooLargeError",
    "VertexError",
    "brute_force",
    "certify",
    "condense",
    "decompose_msp",
    "eval_dico",
    "eval_msp",
    "make_instance",
    "parse_dico",
    "parse_instance",
    "parse_msp",
    "scc",
    "serialize_instance",
    "solve_ssg_bioriented_clique",
    "solve_ssg_cograph",
    "solve_ssg_general",
    "solve_ssg_msp",
    "solve_ssg_sp",
    "solve_ssg_transitive_tournament",
    "solve_ssgw_cograph",
    "solve_ssgw_msp",
    "solve_ssp",
    "to_text",
    "transitive_closure",
    "transitive_reduction",
    "validate_solution",
]
