"""Exact treewidth-based solvers for subset feedback and odd cycle deletion problems."""

from .graph import LabeledInstance, Parity, Problem
from .decomposition import TreeDecomposition, NiceTreeDecomposition, heuristic_td, nicify, validate_td
from .dp.engine import SolveResult, solve_sfvs, solve_soct
from .io import dump_instance, load_instance
from .reductions import solve_via_reduction
from .solve import ResultRecord, solve_instance

__all__ = [
    "LabeledInstance", "Parity", "Problem", "TreeDecomposition", "NiceTreeDecomposition",
    "heuristic_td", "nicify", "validate_td", "SolveResult", "solve_sfvs", "solve_soct",
    "dump_instance", "load_instance", "solve_via_reduction", "ResultRecord", "solve_instance",
]
