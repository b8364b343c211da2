"""Boolean encodings of depth-bounded exact synthesis, and solver plumbing."""

from .cnf import CnfInstance, VarMap, WcnfInstance, emit_dimacs, emit_wcnf
from .decode import decode
from .encode import encode, encode_maxsat, encode_stateprep
from .search import search_depth
from .solvers import SolveResult, solve

__all__ = [
    "CnfInstance",
    "WcnfInstance",
    "VarMap",
    "emit_dimacs",
    "emit_wcnf",
    "encode",
    "encode_maxsat",
    "encode_stateprep",
    "decode",
    "search_depth",
    "solve",
    "SolveResult",
]
