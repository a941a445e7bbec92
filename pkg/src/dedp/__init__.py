"""Disjoint-enough directed paths: solvers, kernelization and generators."""

from .digraph import Digraph
from .instance import Instance, Request, Solution, verify_solution
from .kernel import NoSolution, Reduced, Solved, kernel_bound, kernelize
from .solve import oracle, solve_xp

__all__ = [
    "Digraph",
    "Instance",
    "NoSolution",
    "Reduced",
    "Request",
    "Solution",
    "Solved",
    "kernel_bound",
    "kernelize",
    "oracle",
    "solve_xp",
    "verify_solution",
]
__version__ = "0.1.0"
